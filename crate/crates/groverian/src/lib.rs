//! Groverian entanglement of n-qubit pure states.
//!
//! The Groverian measure of a pure state Ψ is G(Ψ) = sqrt(1 − P_max), where
//! P_max is the best success probability of Grover's search when the input
//! register may be pre-processed by arbitrary single-qubit unitaries. P_max
//! equals the maximum squared overlap of Ψ with any product state, so it can
//! be computed three independent ways:
//!
//! * [`grover`] — exact simulation of the modified search, averaging the
//!   success probability over every marked element;
//! * [`optimize`] — direct numerical maximization over product states
//!   (alternating power iteration with deterministic multistart);
//! * [`closedform`] — evaluation of published closed-form sign-table
//!   expressions for three and five qubits, together with a structural
//!   generator and a transcription audit.
//!
//! The routes do not always agree: for GHZ and W states the closed-form
//! route returns values that differ from the true maximum by as much as 0.5.
//! [`bench`] packages the named witness states, runs every route, and emits
//! comparison reports; [`cli`] exposes the whole pipeline as a command-line
//! tool.

pub mod bench;
pub mod cli;
pub mod closedform;
pub mod grover;
pub mod optimize;
pub mod sample;
pub mod statevec;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("amplitude count {got} does not match 2^n = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state norm {norm} is too far from 1 to renormalize")]
    NotNormalized { norm: f64 },
    #[error("vector is numerically zero")]
    ZeroVector,
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("qubit count {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("{0}")]
    InvalidKind(String),
    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix for qubit {qubit} is not unitary (deviation {dev:.3e})")]
    NonUnitary { qubit: usize, dev: f64 },
    #[error("iteration count {m} exceeds the runaway guard {max} for N = {n_size}")]
    IterationGuard { m: u64, max: u64, n_size: u64 },
    #[error("N = {0} is not a power of two >= 2")]
    InvalidN(u64),
    #[error("value {0} lies outside [0, 1] beyond tolerance")]
    OutOfRange(f64),
    #[error("amplitude {index} has imaginary part {imag:.3e}; the closed-form route requires real amplitudes")]
    ComplexInput { index: usize, imag: f64 },
    #[error("unsupported qubit count n = {n}: {reason}")]
    Unsupported { n: usize, reason: &'static str },
    #[error("grid resolution {got} exceeds the maximum {max}")]
    ResolutionTooLarge { got: usize, max: usize },
    #[error("invalid optimizer configuration: {0}")]
    Config(&'static str),
    #[error("report rows are empty")]
    EmptyReport,
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse failure: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
