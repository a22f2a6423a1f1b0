//! Haar-style random states, qubits, and local unitaries for tests and
//! optimizer restarts.
//!
//! Everything here takes a caller-supplied `Rng`, so seeding stays in one
//! place and results are reproducible bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::statevec::{LocalUnitarySet, Mat2, ProductState, QState, Qubit};

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random single-qubit state: normalized complex Gaussian pair.
pub fn random_qubit<R: Rng>(rng: &mut R) -> Qubit {
    loop {
        let a = gaussian_complex(rng);
        let b = gaussian_complex(rng);
        if let Ok(q) = Qubit::normalized(a, b) {
            return q;
        }
    }
}

/// Haar-random n-qubit pure state: normalized complex Gaussian vector.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> QState {
    let dim = 1usize << n;
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        return QState::from_parts_unchecked(n, amps);
    }
}

/// Random n-qubit state with real amplitudes (normalized real Gaussians).
pub fn random_real_state<R: Rng>(n: usize, rng: &mut R) -> QState {
    let dim = 1usize << n;
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
            .collect();
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        return QState::from_parts_unchecked(n, amps);
    }
}

/// Random product state of n independent Haar-random qubits.
pub fn random_product_state<R: Rng>(n: usize, rng: &mut R) -> ProductState {
    ProductState::new((0..n).map(|_| random_qubit(rng)).collect())
        .expect("n came from a valid state")
}

/// Haar-random 2x2 unitary via Gram-Schmidt on two Gaussian columns.
pub fn random_unitary<R: Rng>(rng: &mut R) -> Mat2 {
    loop {
        // First column: normalized Gaussian pair.
        let a = gaussian_complex(rng);
        let b = gaussian_complex(rng);
        let n1 = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n1 < 1e-6 {
            continue;
        }
        let (a, b) = (a / n1, b / n1);
        // Second column: Gaussian pair orthogonalized against the first.
        let c = gaussian_complex(rng);
        let d = gaussian_complex(rng);
        let proj = a.conj() * c + b.conj() * d;
        let c = c - proj * a;
        let d = d - proj * b;
        let n2 = (c.norm_sqr() + d.norm_sqr()).sqrt();
        if n2 < 1e-6 {
            continue;
        }
        let (c, d) = (c / n2, d / n2);
        return [[a, c], [b, d]];
    }
}

/// One independent Haar-random unitary per qubit.
pub fn random_unitary_set<R: Rng>(n: usize, rng: &mut R) -> LocalUnitarySet {
    LocalUnitarySet::new((0..n).map(|_| random_unitary(rng)).collect())
        .expect("columns are orthonormal by construction")
}
