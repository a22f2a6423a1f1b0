//! Numerical maximization of the squared overlap between an n-qubit state
//! and the set of product states. P_max(Psi) = max |<e_1 ... e_n|Psi>|^2 is
//! the ground-truth route to the Groverian measure G = sqrt(1 - P_max).
//!
//! The maximizer is an alternating power iteration: with all factors but one
//! fixed, the optimal remaining factor is the normalized contraction of the
//! state against the fixed factors, so every update is an exact
//! argmax and the overlap-squared ascends monotonically. Local maxima are
//! real (a basis start on a W state stalls at 1/3), so the optimizer runs a
//! deterministic multistart and keeps the best value.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::statevec::{bit, ProductState, QState, Qubit};
use crate::{Error, Result};

/// Master seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

/// Largest qubit count [`pmax_grid`] accepts; its cost is (resolution^2)^n.
pub const MAX_GRID_QUBITS: usize = 3;

/// Largest grid resolution [`pmax_grid`] accepts.
pub const MAX_GRID_RESOLUTION: usize = 48;

/// Contractions with norm below this are treated as a zero environment and
/// the factor is reset to |0> instead of dividing by the noise.
const ZERO_ENVIRONMENT_TOL: f64 = 1e-15;

/// Slack allowed before a non-increasing update counts as an ascent
/// violation; covers floating-point reassociation only.
const ASCENT_SLACK: f64 = 1e-14;

/// Multistart settings for [`pmax_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Number of independent starts; start 0 is the deterministic
    /// dominant-basis start, the rest are seeded random product states.
    pub starts: usize,
    /// Sweep budget per start.
    pub max_sweeps: usize,
    /// A start stops once a full sweep improves overlap-squared by less
    /// than this.
    pub tol: f64,
    /// Master seed; start k draws from stream k of this seed.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 64,
            max_sweeps: 1000,
            tol: 1e-12,
            seed: DEFAULT_SEED,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::Config("starts must be at least 1"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config("tol must be positive"));
        }
        Ok(())
    }
}

/// Outcome of a [`pmax_numeric`] maximization.
#[derive(Debug, Clone)]
pub struct PmaxResult {
    /// Best overlap-squared found, in [0, 1] up to floating-point noise.
    pub pmax: f64,
    /// Product state attaining `pmax`.
    pub argmax: ProductState,
    /// sqrt(1 - pmax), clamped at 0.
    pub groverian: f64,
    /// Starts whose final sweep improved by less than `tol`.
    pub starts_converged: usize,
    /// Sweeps consumed by the winning start.
    pub sweeps_used: usize,
    /// Zero-environment factor resets across all starts.
    pub fallback_resets: usize,
    /// Factor updates that decreased overlap-squared beyond slack; always 0
    /// unless floating-point assumptions break.
    pub ascent_violations: usize,
}

struct StartOutcome {
    value: f64,
    factors: Vec<Qubit>,
    sweeps: usize,
    converged: bool,
    resets: usize,
    violations: usize,
}

/// <e_1 ... e_n|Psi> for explicit factors.
fn overlap(state: &QState, factors: &[Qubit]) -> Complex64 {
    let n = state.n();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let mut weight = Complex64::new(1.0, 0.0);
        for (j, f) in factors.iter().enumerate() {
            weight *= f.component(bit(i, n, j)).conj();
        }
        total += weight * amp;
    }
    total
}

/// Contraction of Psi against every factor except qubit j:
/// v[c] = sum over i with bit_j(i) = c of Psi_i * prod_{k != j} conj(e_k[bit_k(i)]).
fn environment(state: &QState, factors: &[Qubit], j: usize) -> [Complex64; 2] {
    let n = state.n();
    let mut v = [Complex64::new(0.0, 0.0); 2];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let mut weight = Complex64::new(1.0, 0.0);
        for (k, f) in factors.iter().enumerate() {
            if k != j {
                weight *= f.component(bit(i, n, k)).conj();
            }
        }
        v[bit(i, n, j)] += weight * amp;
    }
    v
}

fn run_start(
    state: &QState,
    mut factors: Vec<Qubit>,
    max_sweeps: usize,
    tol: f64,
) -> StartOutcome {
    let n = state.n();
    let mut current = overlap(state, &factors).norm_sqr();
    let mut resets = 0usize;
    let mut violations = 0usize;
    let mut sweeps = 0usize;
    let mut converged = false;
    for _ in 0..max_sweeps {
        sweeps += 1;
        let before_sweep = current;
        for j in 0..n {
            let v = environment(state, &factors, j);
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm < ZERO_ENVIRONMENT_TOL {
                factors[j] = Qubit::zero();
                resets += 1;
                continue;
            }
            factors[j] = Qubit::new(v[0] / norm, v[1] / norm)
                .expect("explicitly normalized");
            let updated = norm * norm;
            if updated < current - ASCENT_SLACK {
                violations += 1;
            }
            current = updated;
        }
        if current - before_sweep < tol {
            converged = true;
            break;
        }
    }
    StartOutcome {
        value: current,
        factors,
        sweeps,
        converged,
        resets,
        violations,
    }
}

/// Factors of the basis state with the largest amplitude; guarantees the
/// optimizer never reports less than max_i |a_i|^2.
fn dominant_basis_factors(state: &QState) -> Vec<Qubit> {
    let n = state.n();
    let mut best = 0usize;
    let mut best_mag = f64::NEG_INFINITY;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let mag = a.norm_sqr();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    (0..n)
        .map(|j| {
            if bit(best, n, j) == 0 {
                Qubit::zero()
            } else {
                Qubit::one()
            }
        })
        .collect()
}

/// Maximizes |<e_1 ... e_n|Psi>|^2 over product states by alternating power
/// iteration with deterministic multistart. Identical seeds give
/// bit-identical results; ties between starts go to the lowest start index.
pub fn pmax_numeric(state: &QState, cfg: &OptimizerConfig) -> Result<PmaxResult> {
    cfg.validate()?;
    let n = state.n();
    let mut best: Option<StartOutcome> = None;
    let mut starts_converged = 0usize;
    let mut fallback_resets = 0usize;
    let mut ascent_violations = 0usize;
    for start in 0..cfg.starts {
        let init = if start == 0 {
            dominant_basis_factors(state)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(start as u64);
            crate::sample::random_product_state(n, &mut rng)
                .factors()
                .to_vec()
        };
        let outcome = run_start(state, init, cfg.max_sweeps, cfg.tol);
        if outcome.converged {
            starts_converged += 1;
        }
        fallback_resets += outcome.resets;
        ascent_violations += outcome.violations;
        let better = match &best {
            None => true,
            Some(b) => outcome.value > b.value,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one start ran");
    let pmax = best.value;
    let groverian = groverian(pmax)?;
    Ok(PmaxResult {
        pmax,
        argmax: ProductState::new(best.factors)?,
        groverian,
        starts_converged,
        sweeps_used: best.sweeps,
        fallback_resets,
        ascent_violations,
    })
}

/// G = sqrt(1 - pmax). Accepts pmax within 1e-12 outside [0, 1] and clamps.
pub fn groverian(pmax: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&pmax) {
        return Err(Error::OutOfRange(pmax));
    }
    Ok((1.0 - pmax.clamp(0.0, 1.0)).sqrt())
}

/// Exhaustive lower-bound oracle for small n: scans each factor over the
/// grid (cos theta, e^{i phi} sin theta) with `resolution` theta values in
/// [0, pi/2] and `resolution` phi values in [0, 2 pi), and returns the best
/// overlap-squared over all grid product states. Every reported value is
/// attained by an actual product state, so the result never exceeds P_max
/// (up to floating-point noise).
pub fn pmax_grid(state: &QState, resolution: usize) -> Result<f64> {
    let n = state.n();
    if n > MAX_GRID_QUBITS {
        return Err(Error::TooLarge {
            n,
            max: MAX_GRID_QUBITS,
        });
    }
    if resolution > MAX_GRID_RESOLUTION {
        return Err(Error::ResolutionTooLarge {
            got: resolution,
            max: MAX_GRID_RESOLUTION,
        });
    }
    if resolution < 2 {
        return Err(Error::Config("grid resolution must be at least 2"));
    }
    // (cos, sin) pairs over theta in [0, pi/2], endpoints included.
    let theta_step = std::f64::consts::FRAC_PI_2 / (resolution - 1) as f64;
    let thetas: Vec<(f64, f64)> = (0..resolution)
        .map(|t| {
            let theta = t as f64 * theta_step;
            (theta.cos(), theta.sin())
        })
        .collect();
    let phi_step = std::f64::consts::TAU / resolution as f64;
    let phis: Vec<(f64, f64)> = (0..resolution)
        .map(|k| {
            let phi = k as f64 * phi_step;
            (phi.cos(), phi.sin())
        })
        .collect();
    // Conjugated candidate factors for the scanned (non-final) qubits.
    let candidates: Vec<[Complex64; 2]> = thetas
        .iter()
        .flat_map(|&(c, s)| {
            phis.iter()
                .map(move |&(pc, ps)| [Complex64::new(c, 0.0), Complex64::new(pc * s, -ps * s)])
        })
        .collect();

    // For the final qubit the grid maximum collapses algebraically:
    // |conj(e[0]) v0 + conj(e[1]) v1|^2
    //   = cos^2 |v0|^2 + sin^2 |v1|^2 + 2 cos sin Re(e^{-i phi} conj(v0) v1),
    // and cos sin >= 0 on [0, pi/2], so the best phi is the one maximizing
    // Re(e^{-i phi} conj(v0) v1) independently of theta.
    let best_last = |v: [Complex64; 2]| -> f64 {
        let a = v[0].norm_sqr();
        let b = v[1].norm_sqr();
        let w = v[0].conj() * v[1];
        let mut g = f64::NEG_INFINITY;
        for &(pc, ps) in &phis {
            g = g.max(w.re * pc + w.im * ps);
        }
        let mut best = f64::NEG_INFINITY;
        for &(c, s) in &thetas {
            best = best.max(c * c * a + s * s * b + 2.0 * c * s * g);
        }
        best
    };

    let amps = state.amplitudes();
    match n {
        1 => Ok(best_last([amps[0], amps[1]])),
        2 => Ok(candidates
            .par_iter()
            .map(|e0| {
                best_last([
                    e0[0] * amps[0] + e0[1] * amps[2],
                    e0[0] * amps[1] + e0[1] * amps[3],
                ])
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)),
        3 => Ok(candidates
            .par_iter()
            .map(|e0| {
                let half: Vec<Complex64> = (0..4)
                    .map(|r| e0[0] * amps[r] + e0[1] * amps[4 + r])
                    .collect();
                let mut best = f64::NEG_INFINITY;
                for e1 in &candidates {
                    best = best.max(best_last([
                        e1[0] * half[0] + e1[1] * half[2],
                        e1[0] * half[1] + e1[1] * half[3],
                    ]));
                }
                best
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)),
        _ => unreachable!("guarded above"),
    }
}

/// Smallest single-qubit-vs-rest Schmidt bound: for each qubit the largest
/// squared singular value of the 2 x 2^{n-1} amplitude reshape, minimized
/// over qubits. Always an upper bound on P_max.
pub fn bipartition_bound(state: &QState) -> f64 {
    let n = state.n();
    let amps = state.amplitudes();
    let mut bound = f64::INFINITY;
    for j in 0..n {
        let mut g00 = 0.0f64;
        let mut g11 = 0.0f64;
        let mut g01 = Complex64::new(0.0, 0.0);
        let stride = 1usize << (n - 1 - j);
        for base in (0..amps.len()).step_by(2 * stride) {
            for offset in 0..stride {
                let a0 = amps[base + offset];
                let a1 = amps[base + offset + stride];
                g00 += a0.norm_sqr();
                g11 += a1.norm_sqr();
                g01 += a0 * a1.conj();
            }
        }
        let half_gap = 0.5 * (g00 - g11);
        let lambda_max =
            0.5 * (g00 + g11) + (half_gap * half_gap + g01.norm_sqr()).sqrt();
        bound = bound.min(lambda_max);
    }
    bound
}
