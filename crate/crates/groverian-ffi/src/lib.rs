//! C ABI for the Groverian entanglement toolkit.
//!
//! Conventions: every function returns a [`GroverianStatus`]; out-parameters
//! are written only on `Ok`; states are opaque handles created by the
//! `groverian_state_*` constructors and released with [`groverian_state_free`];
//! the most recent failure message for the calling thread is available via
//! [`groverian_last_error`]. No call unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use groverian::cli::StateSpec;
use groverian::closedform::{generate_table, pmax_closed, transcribed_table};
use groverian::grover::{grover_iterate, optimal_iterations, success_probability, GroverRun};
use groverian::optimize::{groverian as measure, pmax_numeric, OptimizerConfig};
use groverian::statevec::{make_state, QState};
use groverian::Error;
use num_complex::Complex64;

/// Result of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroverianStatus {
    /// Success; out-parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: bad spec string, bad amplitudes, out-of-range index.
    InvalidArgument = 2,
    /// Structurally valid input outside the supported domain (complex
    /// amplitudes for the closed form, ungated conjectural qubit counts).
    Unsupported = 3,
    /// The underlying I/O operation failed (state file could not be read).
    IoError = 4,
    /// An internal invariant failed; report this as a bug.
    Internal = 5,
}

/// Opaque n-qubit state handle.
pub struct GroverianState {
    inner: QState,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|cell| *cell.borrow_mut() = message);
}

fn fail(e: &Error) -> GroverianStatus {
    let status = match e {
        Error::ComplexInput { .. } | Error::Unsupported { .. } => GroverianStatus::Unsupported,
        Error::Io(_) => GroverianStatus::IoError,
        _ => GroverianStatus::InvalidArgument,
    };
    set_error(e.to_string());
    status
}

/// Runs `body` without letting a panic cross the ABI.
fn guarded(body: impl FnOnce() -> GroverianStatus) -> GroverianStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            GroverianStatus::Internal
        }
    }
}

unsafe fn state_ref<'a>(state: *const GroverianState) -> Option<&'a QState> {
    state.as_ref().map(|s| &s.inner)
}

fn null_pointer(what: &str) -> GroverianStatus {
    set_error(format!("{what} must not be null"));
    GroverianStatus::NullPointer
}

/// Copies the calling thread's most recent error message into `buf` as a
/// NUL-terminated string (truncated to `len - 1` bytes) and returns the full
/// message length in bytes. A null `buf` or zero `len` just queries the
/// length. The message describes the most recent failing call.
///
/// # Safety
/// `buf`, when non-null, must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn groverian_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|cell| {
        let message = cell.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && len > 0 {
            let copy = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), copy);
            *buf.add(copy) = 0;
        }
        bytes.len()
    })
}

/// Creates a state from a spec string: `"ghz:N"`, `"w:N"`, `"uniform:N"`,
/// `"basis:N:I"`, or a path to a state JSON file. On `Ok`, `*out` owns the
/// new handle and must be released with [`groverian_state_free`].
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn groverian_state_load(
    spec: *const c_char,
    out: *mut *mut GroverianState,
) -> GroverianStatus {
    if spec.is_null() {
        return null_pointer("spec");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let text = match CStr::from_ptr(spec).to_str() {
        Ok(text) => text.to_owned(),
        Err(_) => {
            set_error("spec is not valid UTF-8".to_string());
            return GroverianStatus::InvalidArgument;
        }
    };
    guarded(|| {
        let parsed: StateSpec = match text.parse() {
            Ok(parsed) => parsed,
            Err(ref e) => return fail(e),
        };
        match parsed.load() {
            Ok(state) => {
                *out = Box::into_raw(Box::new(GroverianState { inner: state }));
                GroverianStatus::Ok
            }
            Err(ref e) => fail(e),
        }
    })
}

/// Creates an n-qubit state from amplitude arrays of length `len = 2^n`,
/// index 0 being |0...0> with the first qubit as the most significant bit.
/// `ims` may be null for a real state. The vector must already be normalized
/// to within 1e-6; it is renormalized exactly on construction.
///
/// # Safety
/// `res` (and `ims`, when non-null) must point to `len` readable doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn groverian_state_from_amplitudes(
    n: usize,
    res: *const f64,
    ims: *const f64,
    len: usize,
    out: *mut *mut GroverianState,
) -> GroverianStatus {
    if res.is_null() {
        return null_pointer("res");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    let res = std::slice::from_raw_parts(res, len);
    let ims = if ims.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ims, len))
    };
    guarded(|| {
        let amps = (0..len)
            .map(|i| Complex64::new(res[i], ims.map_or(0.0, |xs| xs[i])))
            .collect();
        match make_state(n, amps) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(GroverianState { inner: state }));
                GroverianStatus::Ok
            }
            Err(ref e) => fail(e),
        }
    })
}

/// Releases a state handle. Null is a no-op.
///
/// # Safety
/// `state`, when non-null, must be a handle returned by a constructor of
/// this library that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn groverian_state_free(state: *mut GroverianState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Returns the qubit count of a state, or -1 for a null handle.
///
/// # Safety
/// `state`, when non-null, must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn groverian_state_qubits(state: *const GroverianState) -> i32 {
    match state_ref(state) {
        Some(state) => state.n() as i32,
        None => -1,
    }
}

/// Maximizes the squared product-state overlap numerically. `starts == 0`
/// selects the default multistart count. On `Ok` writes the maximum to
/// `*out_pmax` and, when `out_measure` is non-null, the entanglement
/// measure sqrt(1 - pmax) to `*out_measure`. Deterministic given `seed`.
///
/// # Safety
/// `state` must be a live handle; `out_pmax` must be valid; `out_measure`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn groverian_pmax_numeric(
    state: *const GroverianState,
    seed: u64,
    starts: usize,
    out_pmax: *mut f64,
    out_measure: *mut f64,
) -> GroverianStatus {
    let Some(state) = state_ref(state) else {
        return null_pointer("state");
    };
    if out_pmax.is_null() {
        return null_pointer("out_pmax");
    }
    guarded(|| {
        let cfg = OptimizerConfig {
            starts: if starts == 0 {
                OptimizerConfig::default().starts
            } else {
                starts
            },
            seed,
            ..OptimizerConfig::default()
        };
        match pmax_numeric(state, &cfg) {
            Ok(result) => {
                *out_pmax = result.pmax;
                if !out_measure.is_null() {
                    *out_measure = result.groverian;
                }
                GroverianStatus::Ok
            }
            Err(ref e) => fail(e),
        }
    })
}

/// Evaluates the closed-form overlap expression. Validated qubit counts are
/// 2 (proved), 3 and 5 (transcribed); any other count requires
/// `conjectural = true` and uses the generated extension. Real amplitudes
/// only; complex input yields `Unsupported`.
///
/// # Safety
/// `state` must be a live handle and `out_pmax` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn groverian_pmax_closed(
    state: *const GroverianState,
    conjectural: bool,
    out_pmax: *mut f64,
) -> GroverianStatus {
    let Some(state) = state_ref(state) else {
        return null_pointer("state");
    };
    if out_pmax.is_null() {
        return null_pointer("out_pmax");
    }
    guarded(|| {
        let n = state.n();
        let table = match n {
            3 | 5 => transcribed_table(n),
            2 => generate_table(2),
            _ if conjectural => generate_table(n),
            _ => Err(Error::Unsupported {
                n,
                reason: "closed form outside n in {2, 3, 5} is conjectural; pass conjectural = true",
            }),
        };
        let table = match table {
            Ok(table) => table,
            Err(ref e) => return fail(e),
        };
        match pmax_closed(state, &table) {
            Ok(value) => {
                *out_pmax = value;
                GroverianStatus::Ok
            }
            Err(ref e) => fail(e),
        }
    })
}

/// Entanglement measure sqrt(1 - pmax) for a squared overlap in [0, 1]
/// (values within 1e-12 above 1 are clamped).
///
/// # Safety
/// `out_measure` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn groverian_measure(
    pmax: f64,
    out_measure: *mut f64,
) -> GroverianStatus {
    if out_measure.is_null() {
        return null_pointer("out_measure");
    }
    guarded(|| match measure(pmax) {
        Ok(value) => {
            *out_measure = value;
            GroverianStatus::Ok
        }
        Err(ref e) => fail(e),
    })
}

/// Runs Grover search from `state` for the marked basis index and writes
/// the final success probability. `iterations < 0` selects the optimal
/// count for the state's dimension; explicit counts are capped by the
/// iteration guard.
///
/// # Safety
/// `state` must be a live handle and `out_success` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn groverian_grover_success(
    state: *const GroverianState,
    marked: usize,
    iterations: i64,
    out_success: *mut f64,
) -> GroverianStatus {
    let Some(state) = state_ref(state) else {
        return null_pointer("state");
    };
    if out_success.is_null() {
        return null_pointer("out_success");
    }
    guarded(|| {
        let dim = state.dim() as u64;
        let m = if iterations < 0 {
            match optimal_iterations(dim) {
                Ok(m) => m,
                Err(ref e) => return fail(e),
            }
        } else {
            iterations as u64
        };
        let run = GroverRun {
            marked,
            iterations: m,
        };
        let after = match grover_iterate(state, run) {
            Ok(after) => after,
            Err(ref e) => return fail(e),
        };
        match success_probability(&after, marked) {
            Ok(p) => {
                *out_success = p;
                GroverianStatus::Ok
            }
            Err(ref e) => fail(e),
        }
    })
}
