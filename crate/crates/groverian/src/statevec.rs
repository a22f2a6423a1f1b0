//! Dense state vectors for n-qubit pure states and local-unitary application.
//!
//! Index convention: basis index `i` is read as the bit string
//! `|i0 i1 … i_{n-1}>` with `i0` the most significant bit, so qubit `j`
//! (0-based) owns bit `n - 1 - j` of `i`. Every module in the crate relies on
//! this single convention; `build(Basis(6), 3)` equals `|110>` and the tests
//! below pin it.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::{Error, Result};

/// Hard cap on the qubit count; keeps every exact operation desk-scale.
pub const MAX_QUBITS: usize = 14;

/// Accepted deviation of an input state's norm from 1 before rejection.
/// Inputs inside the window are renormalized exactly.
pub const INPUT_NORM_TOL: f64 = 1e-6;

/// Below this norm an input vector is treated as zero.
pub const ZERO_NORM_TOL: f64 = 1e-12;

/// Maximum entrywise deviation of U†U from the identity.
pub const UNITARY_TOL: f64 = 1e-10;

const QUBIT_NORM_TOL: f64 = 1e-12;

/// Bit of basis index `i` owned by qubit `j` under the MSB-first convention.
#[inline]
pub(crate) fn bit(i: usize, n: usize, j: usize) -> usize {
    (i >> (n - 1 - j)) & 1
}

/// Pure state of `n` qubits as a dense vector of `2^n` amplitudes, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QState {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the underlying vector, `2^n`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// True when every amplitude is real within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= tol)
    }

    pub(crate) fn from_parts_unchecked(n: usize, amps: Vec<Complex64>) -> Self {
        QState { n, amps }
    }
}

/// Single-qubit pure state (alpha, beta), unit norm. Global phase is not
/// canonicalized; callers compare via overlap magnitudes, never componentwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    alpha: Complex64,
    beta: Complex64,
}

impl Qubit {
    /// Accepts components that are already unit-norm within 1e-12.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr.sqrt() - 1.0).abs() > QUBIT_NORM_TOL {
            return Err(Error::NotNormalized {
                norm: norm_sqr.sqrt(),
            });
        }
        Ok(Qubit { alpha, beta })
    }

    /// Renormalizes arbitrary components; rejects the zero vector.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm < ZERO_NORM_TOL {
            return Err(Error::ZeroVector);
        }
        Ok(Qubit {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn zero() -> Self {
        Qubit {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Qubit {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
        }
    }

    /// (|0> + |1>)/sqrt(2).
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Qubit {
            alpha: Complex64::new(h, 0.0),
            beta: Complex64::new(h, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Component at computational-basis index `c` (0 or 1).
    pub fn component(&self, c: usize) -> Complex64 {
        if c == 0 {
            self.alpha
        } else {
            self.beta
        }
    }
}

/// Tensor product of `n` single-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<Qubit>,
}

impl ProductState {
    pub fn new(factors: Vec<Qubit>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NoQubits);
        }
        if factors.len() > MAX_QUBITS {
            return Err(Error::TooLarge {
                n: factors.len(),
                max: MAX_QUBITS,
            });
        }
        Ok(ProductState { factors })
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Qubit] {
        &self.factors
    }
}

/// 2x2 complex matrix in row-major order.
pub type Mat2 = [[Complex64; 2]; 2];

/// One 2x2 unitary per qubit, validated to `UNITARY_TOL` at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitarySet {
    mats: Vec<Mat2>,
}

impl LocalUnitarySet {
    pub fn new(mats: Vec<Mat2>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::NoQubits);
        }
        for (j, u) in mats.iter().enumerate() {
            let dev = unitarity_deviation(u);
            if dev > UNITARY_TOL {
                return Err(Error::NonUnitary { qubit: j, dev });
            }
        }
        Ok(LocalUnitarySet { mats })
    }

    pub fn identity(n: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        LocalUnitarySet {
            mats: vec![[[one, zero], [zero, one]]; n],
        }
    }

    pub fn hadamard(n: usize) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        LocalUnitarySet {
            mats: vec![[[h, h], [h, -h]]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat2] {
        &self.mats
    }

    /// Conjugate-transpose of every matrix; applying it undoes the set.
    pub fn adjoint(&self) -> Self {
        let mats = self
            .mats
            .iter()
            .map(|u| {
                [
                    [u[0][0].conj(), u[1][0].conj()],
                    [u[0][1].conj(), u[1][1].conj()],
                ]
            })
            .collect();
        LocalUnitarySet { mats }
    }
}

/// Max-entry deviation of U†U from the identity.
fn unitarity_deviation(u: &Mat2) -> f64 {
    let mut dev: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            // (U†U)[r][c] = sum_k conj(U[k][r]) U[k][c]
            let mut e = Complex64::new(0.0, 0.0);
            for row in u {
                e += row[r].conj() * row[c];
            }
            let target = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((e - Complex64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// Named state builders resolved by [`build`].
#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    /// (|0…0> + |1…1>)/sqrt(2); requires n >= 2.
    Ghz,
    /// Uniform superposition of the n weight-1 basis states; requires n >= 2.
    W,
    /// Uniform superposition of all 2^n basis states.
    Uniform,
    /// Computational basis state |i>.
    Basis(usize),
    /// Tensor product of explicit factors.
    Product(ProductState),
}

/// Validates and renormalizes a raw amplitude vector into a [`QState`].
pub fn make_state(n: usize, amplitudes: Vec<Complex64>) -> Result<QState> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    if n > MAX_QUBITS {
        return Err(Error::TooLarge { n, max: MAX_QUBITS });
    }
    let dim = 1usize << n;
    if amplitudes.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: amplitudes.len(),
        });
    }
    let norm: f64 = amplitudes
        .iter()
        .map(Complex64::norm_sqr)
        .sum::<f64>()
        .sqrt();
    if norm < ZERO_NORM_TOL {
        return Err(Error::ZeroVector);
    }
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let amps = amplitudes.into_iter().map(|a| a / norm).collect();
    Ok(QState::from_parts_unchecked(n, amps))
}

/// Builds one of the named states on `n` qubits.
pub fn build(kind: StateKind, n: usize) -> Result<QState> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    if n > MAX_QUBITS {
        return Err(Error::TooLarge { n, max: MAX_QUBITS });
    }
    let dim = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        StateKind::Ghz => {
            if n < 2 {
                return Err(Error::InvalidKind(
                    "ghz requires at least two qubits".into(),
                ));
            }
            let mut amps = vec![zero; dim];
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = h;
            amps[dim - 1] = h;
            Ok(QState::from_parts_unchecked(n, amps))
        }
        StateKind::W => {
            if n < 2 {
                return Err(Error::InvalidKind("w requires at least two qubits".into()));
            }
            let mut amps = vec![zero; dim];
            let w = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            for j in 0..n {
                amps[1usize << j] = w;
            }
            Ok(QState::from_parts_unchecked(n, amps))
        }
        StateKind::Uniform => {
            let u = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
            Ok(QState::from_parts_unchecked(n, vec![u; dim]))
        }
        StateKind::Basis(i) => {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, len: dim });
            }
            let mut amps = vec![zero; dim];
            amps[i] = Complex64::new(1.0, 0.0);
            Ok(QState::from_parts_unchecked(n, amps))
        }
        StateKind::Product(p) => {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.n(),
                });
            }
            Ok(expand(&p))
        }
    }
}

/// <a|b> = sum_i conj(a_i) b_i.
pub fn inner_product(a: &QState, b: &QState) -> Result<Complex64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Expands a product state into its dense 2^n-amplitude form.
pub fn expand(p: &ProductState) -> QState {
    let n = p.n();
    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut a = Complex64::new(1.0, 0.0);
        for (j, f) in p.factors().iter().enumerate() {
            a *= f.component(bit(i, n, j));
        }
        amps.push(a);
    }
    QState::from_parts_unchecked(n, amps)
}

/// Applies (U_1 ⊗ … ⊗ U_n) to the state. Norm is preserved because every
/// matrix is unitary by construction of [`LocalUnitarySet`].
pub fn apply_locals(state: &QState, u: &LocalUnitarySet) -> Result<QState> {
    let n = state.n();
    if u.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.n(),
        });
    }
    let mut amps = state.amplitudes().to_vec();
    for (j, m) in u.mats().iter().enumerate() {
        let step = 1usize << (n - 1 - j);
        for base in (0..amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i0 = base + offset;
                let i1 = i0 + step;
                let a0 = amps[i0];
                let a1 = amps[i1];
                amps[i0] = m[0][0] * a0 + m[0][1] * a1;
                amps[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
    Ok(QState::from_parts_unchecked(n, amps))
}

/// Writes the state as `{"n": …, "amplitudes": [[re, im], …]}` with
/// 17-significant-digit decimals, enough to round-trip any f64.
pub fn write_state_json<W: Write>(state: &QState, mut w: W) -> Result<()> {
    write!(w, "{{\"n\": {}, \"amplitudes\": [", state.n())?;
    for (i, a) in state.amplitudes().iter().enumerate() {
        if i > 0 {
            write!(w, ", ")?;
        }
        write!(w, "[{:.16e}, {:.16e}]", a.re, a.im)?;
    }
    writeln!(w, "]}}")?;
    Ok(())
}

/// Reads the JSON produced by [`write_state_json`]; accepts any finite
/// numbers and renormalizes through [`make_state`].
pub fn read_state_json<R: Read>(r: R) -> Result<QState> {
    let value: serde_json::Value =
        serde_json::from_reader(r).map_err(|e| Error::Parse(format!("state json: {e}")))?;
    let n = value
        .get("n")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Parse("state json: missing integer field \"n\"".into()))?;
    let raw = value
        .get("amplitudes")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| Error::Parse("state json: missing array field \"amplitudes\"".into()))?;
    let mut amps = Vec::with_capacity(raw.len());
    for (i, entry) in raw.iter().enumerate() {
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Parse(format!("state json: amplitude {i} is not a [re, im] pair")))?;
        let re = pair[0]
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("state json: amplitude {i} re is not a number")))?;
        let im = pair[1]
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("state json: amplitude {i} im is not a number")))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!("state json: amplitude {i} is not finite")));
        }
        amps.push(Complex64::new(re, im));
    }
    make_state(n as usize, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn make_state_accepts_basis_vector() {
        let s = make_state(1, vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(s.n(), 1);
        assert_close(s.norm_sqr(), 1.0, 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)] // rounded on purpose: tests the window
    fn make_state_renormalizes_rounded_input() {
        // 0.707107 decimals: norm off by ~3e-7, inside the acceptance window.
        let s = make_state(1, vec![c(0.707107, 0.0), c(0.707107, 0.0)]).unwrap();
        assert_close(s.norm_sqr(), 1.0, 1e-14);
    }

    #[test]
    fn make_state_rejects_wrong_length() {
        let err = make_state(2, vec![c(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn make_state_rejects_zero_and_far_from_unit() {
        assert!(matches!(
            make_state(1, vec![c(0.0, 0.0); 2]).unwrap_err(),
            Error::ZeroVector
        ));
        assert!(matches!(
            make_state(1, vec![c(0.5, 0.0), c(0.0, 0.0)]).unwrap_err(),
            Error::NotNormalized { .. }
        ));
    }

    #[test]
    fn make_state_rejects_oversized_n() {
        let err = make_state(15, vec![c(1.0, 0.0); 1 << 15]).unwrap_err();
        assert!(matches!(err, Error::TooLarge { n: 15, max: MAX_QUBITS }));
    }

    #[test]
    fn build_ghz_places_endpoints() {
        let s = build(StateKind::Ghz, 3).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(s.amp(0).re, h, 1e-15);
        assert_close(s.amp(7).re, h, 1e-15);
        assert_close(s.norm_sqr(), 1.0, 1e-15);
        for i in 1..7 {
            assert_eq!(s.amp(i), c(0.0, 0.0));
        }
    }

    #[test]
    fn build_w_populates_weight_one_indices() {
        let s = build(StateKind::W, 3).unwrap();
        let w = 1.0 / 3f64.sqrt();
        for i in [1usize, 2, 4] {
            assert_close(s.amp(i).re, w, 1e-15);
        }
        for i in [0usize, 3, 5, 6, 7] {
            assert_eq!(s.amp(i), c(0.0, 0.0));
        }
    }

    #[test]
    fn build_uniform_five_qubits() {
        let s = build(StateKind::Uniform, 5).unwrap();
        for a in s.amplitudes() {
            assert_close(a.re, 1.0 / (4.0 * 2f64.sqrt()), 1e-15);
        }
    }

    #[test]
    fn build_rejects_small_entangled_kinds_and_bad_basis() {
        assert!(matches!(
            build(StateKind::Ghz, 1).unwrap_err(),
            Error::InvalidKind(_)
        ));
        assert!(matches!(
            build(StateKind::Basis(8), 3).unwrap_err(),
            Error::IndexOutOfRange { index: 8, len: 8 }
        ));
    }

    #[test]
    fn bit_convention_pins_msb_first() {
        // |110> = index 6 on three qubits: qubits 0 and 1 set, qubit 2 clear.
        let s = build(StateKind::Basis(6), 3).unwrap();
        assert_eq!(s.amp(6), c(1.0, 0.0));
        let p = ProductState::new(vec![Qubit::one(), Qubit::one(), Qubit::zero()]).unwrap();
        assert_eq!(expand(&p), s);
    }

    #[test]
    fn inner_product_basics() {
        let ghz = build(StateKind::Ghz, 3).unwrap();
        let eta = build(StateKind::Uniform, 3).unwrap();
        let b0 = build(StateKind::Basis(0), 3).unwrap();
        let b7 = build(StateKind::Basis(7), 3).unwrap();
        assert_close(inner_product(&ghz, &ghz).unwrap().re, 1.0, 1e-15);
        assert_close(inner_product(&b0, &b7).unwrap().norm(), 0.0, 1e-15);
        // <GHZ|eta> = 2 * (1/sqrt2) * (1/(2 sqrt2)) = 1/2.
        assert_close(inner_product(&ghz, &eta).unwrap().re, 0.5, 1e-15);
        let b2 = build(StateKind::Basis(0), 2).unwrap();
        assert!(inner_product(&ghz, &b2).is_err());
    }

    #[test]
    fn expand_uniform_product_is_uniform_state() {
        let p = ProductState::new(vec![Qubit::plus(); 3]).unwrap();
        let s = expand(&p);
        let eta = build(StateKind::Uniform, 3).unwrap();
        for i in 0..8 {
            assert_close((s.amp(i) - eta.amp(i)).norm(), 0.0, 1e-15);
        }
    }

    #[test]
    fn expand_imaginary_factors_phase_by_weight() {
        // ((|0> + i|1>)/sqrt2)^3: amplitude at index i is i^weight(i)/(2 sqrt2).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = Qubit::new(c(h, 0.0), c(0.0, h)).unwrap();
        let s = expand(&ProductState::new(vec![f; 3]).unwrap());
        let unit = 1.0 / (2.0 * 2f64.sqrt());
        for i in 0..8usize {
            let w = i.count_ones();
            let expect = c(0.0, 1.0).powu(w) * unit;
            assert_close((s.amp(i) - expect).norm(), 0.0, 1e-15);
        }
    }

    #[test]
    fn apply_locals_identity_and_hadamard() {
        let ghz = build(StateKind::Ghz, 3).unwrap();
        let same = apply_locals(&ghz, &LocalUnitarySet::identity(3)).unwrap();
        for i in 0..8 {
            assert_close((same.amp(i) - ghz.amp(i)).norm(), 0.0, 1e-15);
        }
        let zeros = build(StateKind::Basis(0), 3).unwrap();
        let eta = apply_locals(&zeros, &LocalUnitarySet::hadamard(3)).unwrap();
        let expect = build(StateKind::Uniform, 3).unwrap();
        for i in 0..8 {
            assert_close((eta.amp(i) - expect.amp(i)).norm(), 0.0, 1e-14);
        }
    }

    #[test]
    fn apply_locals_x_on_qubit_zero_flips_ghz_branches() {
        let ghz = build(StateKind::Ghz, 3).unwrap();
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let x: Mat2 = [[zero, one], [one, zero]];
        let id: Mat2 = [[one, zero], [zero, one]];
        let u = LocalUnitarySet::new(vec![x, id, id]).unwrap();
        let s = apply_locals(&ghz, &u).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|100> + |011>)/sqrt2.
        assert_close(s.amp(4).re, h, 1e-15);
        assert_close(s.amp(3).re, h, 1e-15);
        assert_close(s.amp(0).norm(), 0.0, 1e-15);
        assert_close(s.amp(7).norm(), 0.0, 1e-15);
    }

    #[test]
    fn apply_locals_adjoint_recovers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = crate::sample::random_state(4, &mut rng);
        let u = crate::sample::random_unitary_set(4, &mut rng);
        let round = apply_locals(&apply_locals(&s, &u).unwrap(), &u.adjoint()).unwrap();
        for i in 0..s.dim() {
            assert_close((round.amp(i) - s.amp(i)).norm(), 0.0, 1e-10);
        }
    }

    #[test]
    fn local_unitary_set_rejects_non_unitary() {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let bad: Mat2 = [[one, one], [zero, one]];
        assert!(matches!(
            LocalUnitarySet::new(vec![bad]).unwrap_err(),
            Error::NonUnitary { qubit: 0, .. }
        ));
    }

    #[test]
    fn state_json_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = crate::sample::random_state(3, &mut rng);
        let mut buf = Vec::new();
        write_state_json(&s, &mut buf).unwrap();
        let back = read_state_json(buf.as_slice()).unwrap();
        assert_eq!(back.n(), 3);
        for i in 0..8 {
            assert_close((back.amp(i) - s.amp(i)).norm(), 0.0, 1e-15);
        }
    }

    #[test]
    fn state_json_rejects_malformed_documents() {
        assert!(read_state_json("{}".as_bytes()).is_err());
        assert!(read_state_json("{\"n\": 1, \"amplitudes\": [[1.0]]}".as_bytes()).is_err());
        assert!(read_state_json("not json".as_bytes()).is_err());
    }
}
