//! Closed-form P_max expressions as explicit sign tables.
//!
//! For n qubits the expression is P = 4^{1-n} [ sum_k sqrt(A_k^2 + B_k^2) ]^2
//! over 2^{n-1} rows, where A_k is a signed sum of the even-Hamming-weight
//! amplitudes and B_k of the odd ones. The three- and five-qubit tables are
//! kept twice: once transcribed literally from their published form
//! ([`transcribed_table`]), and once rebuilt from the structural rule the
//! published rows obey ([`generate_table`]). [`verify_transcription`]
//! compares the two and surfaces every divergence; the five-qubit source
//! contains two entries in its final radical that break the otherwise
//! perfect parity pattern, and they are reported as suspected typos, never
//! silently patched. The transcription is authoritative when reproducing
//! published values; the generator is authoritative for computation and for
//! the explicitly conjectural extension to other qubit counts.

use std::collections::BTreeMap;

use crate::statevec::QState;
use crate::{Error, Result};

/// Largest n for which [`generate_table`] will build a table.
pub const MAX_TABLE_QUBITS: usize = 10;

/// Largest imaginary part tolerated by [`pmax_closed`]: the closed forms
/// are defined for real amplitudes only.
pub const REAL_INPUT_TOL: f64 = 1e-12;

/// One radical of the closed form: signed index lists for the A (even
/// parity) and B (odd parity) sums, kept in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignRow {
    /// (basis index, sign) terms of the A sum.
    pub a_terms: Vec<(usize, i8)>,
    /// (basis index, sign) terms of the B sum.
    pub b_terms: Vec<(usize, i8)>,
}

impl SignRow {
    /// A terms as an index-to-sign map (order-insensitive view).
    pub fn a_map(&self) -> BTreeMap<usize, i8> {
        self.a_terms.iter().copied().collect()
    }

    /// B terms as an index-to-sign map (order-insensitive view).
    pub fn b_map(&self) -> BTreeMap<usize, i8> {
        self.b_terms.iter().copied().collect()
    }
}

/// Full closed-form table for n qubits: 2^{n-1} rows and prefactor 4^{1-n}.
#[derive(Debug, Clone, PartialEq)]
pub struct SignTable {
    n: usize,
    prefactor: f64,
    rows: Vec<SignRow>,
}

impl SignTable {
    /// Builds a table from explicit rows; the prefactor is fixed at 4^{1-n}.
    pub fn with_rows(n: usize, rows: Vec<SignRow>) -> Result<Self> {
        if !(2..=MAX_TABLE_QUBITS).contains(&n) {
            return Err(Error::Unsupported {
                n,
                reason: "sign tables cover two through ten qubits",
            });
        }
        let expected = 1usize << (n - 1);
        if rows.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: rows.len(),
            });
        }
        Ok(SignTable {
            n,
            prefactor: 4f64.powi(1 - n as i32),
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn rows(&self) -> &[SignRow] {
        &self.rows
    }

    /// Mutable row access; exists so tests can corrupt a copy on purpose.
    pub fn rows_mut(&mut self) -> &mut [SignRow] {
        &mut self.rows
    }
}

/// One divergence between a transcribed entry and the generated table.
/// `generated` is 0 when the generated row has no term at this index at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based row number in the transcribed table.
    pub row: usize,
    /// Basis index of the offending term.
    pub index: usize,
    /// Sign as transcribed.
    pub transcribed: i8,
    /// Matching generated sign in the transcribed row's sign convention,
    /// or 0 when the index is absent from the generated block.
    pub generated: i8,
}

/// Overall judgement of a transcription comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every entry matches modulo the allowed symmetries.
    Exact,
    /// All divergences are indices foreign to the generated block: the
    /// signature of slipped subscripts rather than structural disagreement.
    SuspectedTypos,
    /// At least one genuine sign disagreement on a shared index.
    StructuralMismatch,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Exact => "exact",
            Verdict::SuspectedTypos => "suspected-typos",
            Verdict::StructuralMismatch => "structural-mismatch",
        })
    }
}

/// Result of comparing a transcribed table against the generated one.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptionReport {
    pub n: usize,
    pub verdict: Verdict,
    pub mismatches: Vec<Mismatch>,
}

impl TranscriptionReport {
    /// `{"n":…,"verdict":…,"mismatches":[{"row":…,"index":…,…},…]}`.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"n\": {}, \"verdict\": \"{}\", \"mismatches\": [", self.n, self.verdict);
        for (k, m) in self.mismatches.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!(
                "{{\"row\": {}, \"index\": {}, \"transcribed\": {}, \"generated\": {}}}",
                m.row, m.index, m.transcribed, m.generated
            ));
        }
        out.push_str("]}");
        out
    }
}

/// One transcribed radical: its A-part and B-part (index, sign) terms.
type RowTerms<const K: usize> = ([(usize, i8); K], [(usize, i8); K]);

/// Three-qubit rows exactly as published: (A terms, B terms) per radical.
const THREE_TERMS: [RowTerms<4>; 4] = [
    // term 1
    (
        [(0, 1), (6, -1), (5, -1), (3, -1)],
        [(4, 1), (2, 1), (1, 1), (7, -1)],
    ),
    // term 2
    (
        [(0, 1), (6, -1), (5, 1), (3, 1)],
        [(4, 1), (2, 1), (1, -1), (7, 1)],
    ),
    // term 3
    (
        [(0, 1), (6, 1), (5, -1), (3, 1)],
        [(4, 1), (2, -1), (1, 1), (7, 1)],
    ),
    // term 4
    (
        [(0, 1), (6, 1), (5, 1), (3, -1)],
        [(4, 1), (2, -1), (1, -1), (7, -1)],
    ),
];

/// Five-qubit rows exactly as published, slipped subscripts included: the
/// final radical's A part really does contain indices 25 and 21 (odd
/// parity) where the pattern of the other rows has 9 and 5.
const FIVE_TERMS: [RowTerms<16>; 16] = [
    // term 1
    (
        [
            (0, 1), (24, -1), (20, -1), (12, -1), (18, -1), (10, -1), (6, -1), (30, 1),
            (17, -1), (9, -1), (5, -1), (29, 1), (3, -1), (27, 1), (23, 1), (15, 1),
        ],
        [
            (16, 1), (8, 1), (4, 1), (28, -1), (2, 1), (26, -1), (22, -1), (14, -1),
            (1, 1), (25, -1), (21, -1), (13, -1), (19, -1), (11, -1), (7, -1), (31, 1),
        ],
    ),
    // term 2
    (
        [
            (0, 1), (24, -1), (20, -1), (12, -1), (18, -1), (10, -1), (6, -1), (30, 1),
            (17, 1), (9, 1), (5, 1), (29, -1), (3, 1), (27, -1), (23, -1), (15, -1),
        ],
        [
            (16, 1), (8, 1), (4, 1), (28, -1), (2, 1), (26, -1), (22, -1), (14, -1),
            (1, -1), (25, 1), (21, 1), (13, 1), (19, 1), (11, 1), (7, 1), (31, -1),
        ],
    ),
    // term 3
    (
        [
            (0, 1), (24, -1), (20, -1), (12, -1), (18, 1), (10, 1), (6, 1), (30, -1),
            (17, -1), (9, -1), (5, -1), (29, 1), (3, 1), (27, -1), (23, -1), (15, -1),
        ],
        [
            (16, 1), (8, 1), (4, 1), (28, -1), (2, -1), (26, 1), (22, 1), (14, 1),
            (1, 1), (25, -1), (21, -1), (13, -1), (19, 1), (11, 1), (7, 1), (31, -1),
        ],
    ),
    // term 4
    (
        [
            (0, 1), (24, -1), (20, -1), (12, -1), (18, 1), (10, 1), (6, 1), (30, -1),
            (17, 1), (9, 1), (5, 1), (29, -1), (3, -1), (27, 1), (23, 1), (15, 1),
        ],
        [
            (16, 1), (8, 1), (4, 1), (28, -1), (2, -1), (26, 1), (22, 1), (14, 1),
            (1, -1), (25, 1), (21, 1), (13, 1), (19, -1), (11, -1), (7, -1), (31, 1),
        ],
    ),
    // term 5
    (
        [
            (0, 1), (24, -1), (20, 1), (12, 1), (18, -1), (10, -1), (6, 1), (30, -1),
            (17, -1), (9, -1), (5, 1), (29, -1), (3, -1), (27, 1), (23, -1), (15, -1),
        ],
        [
            (16, 1), (8, 1), (4, -1), (28, 1), (2, 1), (26, -1), (22, 1), (14, 1),
            (1, 1), (25, -1), (21, 1), (13, 1), (19, -1), (11, -1), (7, 1), (31, -1),
        ],
    ),
    // term 6
    (
        [
            (0, 1), (24, -1), (20, 1), (12, 1), (18, -1), (10, -1), (6, 1), (30, -1),
            (17, 1), (9, 1), (5, -1), (29, 1), (3, 1), (27, -1), (23, 1), (15, 1),
        ],
        [
            (16, 1), (8, 1), (4, -1), (28, 1), (2, 1), (26, -1), (22, 1), (14, 1),
            (1, -1), (25, 1), (21, -1), (13, -1), (19, 1), (11, 1), (7, -1), (31, 1),
        ],
    ),
    // term 7
    (
        [
            (0, 1), (24, -1), (20, 1), (12, 1), (18, 1), (10, 1), (6, -1), (30, 1),
            (17, -1), (9, -1), (5, 1), (29, -1), (3, 1), (27, -1), (23, 1), (15, 1),
        ],
        [
            (16, 1), (8, 1), (4, -1), (28, 1), (2, -1), (26, 1), (22, -1), (14, -1),
            (1, 1), (25, -1), (21, 1), (13, 1), (19, 1), (11, 1), (7, -1), (31, 1),
        ],
    ),
    // term 8
    (
        [
            (0, 1), (24, -1), (20, 1), (12, 1), (18, 1), (10, 1), (6, -1), (30, 1),
            (17, 1), (9, 1), (5, -1), (29, 1), (3, -1), (27, 1), (23, -1), (15, -1),
        ],
        [
            (16, 1), (8, 1), (4, -1), (28, 1), (2, -1), (26, 1), (22, -1), (14, -1),
            (1, -1), (25, 1), (21, -1), (13, -1), (19, -1), (11, -1), (7, 1), (31, -1),
        ],
    ),
    // term 9
    (
        [
            (0, 1), (24, 1), (20, -1), (12, 1), (18, -1), (10, 1), (6, -1), (30, -1),
            (17, -1), (9, 1), (5, -1), (29, -1), (3, -1), (27, -1), (23, 1), (15, -1),
        ],
        [
            (16, 1), (8, -1), (4, 1), (28, 1), (2, 1), (26, 1), (22, -1), (14, 1),
            (1, 1), (25, 1), (21, -1), (13, 1), (19, -1), (11, 1), (7, -1), (31, -1),
        ],
    ),
    // term 10
    (
        [
            (0, 1), (24, 1), (20, -1), (12, 1), (18, -1), (10, 1), (6, -1), (30, -1),
            (17, 1), (9, -1), (5, 1), (29, 1), (3, 1), (27, 1), (23, -1), (15, 1),
        ],
        [
            (16, 1), (8, -1), (4, 1), (28, 1), (2, 1), (26, 1), (22, -1), (14, 1),
            (1, -1), (25, -1), (21, 1), (13, -1), (19, 1), (11, -1), (7, 1), (31, 1),
        ],
    ),
    // term 11
    (
        [
            (0, 1), (24, 1), (20, -1), (12, 1), (18, 1), (10, -1), (6, 1), (30, 1),
            (17, -1), (9, 1), (5, -1), (29, -1), (3, 1), (27, 1), (23, -1), (15, 1),
        ],
        [
            (16, 1), (8, -1), (4, 1), (28, 1), (2, -1), (26, -1), (22, 1), (14, -1),
            (1, 1), (25, 1), (21, -1), (13, 1), (19, 1), (11, -1), (7, 1), (31, 1),
        ],
    ),
    // term 12
    (
        [
            (0, 1), (24, 1), (20, -1), (12, 1), (18, 1), (10, -1), (6, 1), (30, 1),
            (17, 1), (9, -1), (5, 1), (29, 1), (3, -1), (27, -1), (23, 1), (15, -1),
        ],
        [
            (16, 1), (8, -1), (4, 1), (28, 1), (2, -1), (26, -1), (22, 1), (14, -1),
            (1, -1), (25, -1), (21, 1), (13, -1), (19, -1), (11, 1), (7, -1), (31, -1),
        ],
    ),
    // term 13
    (
        [
            (0, 1), (24, 1), (20, 1), (12, -1), (18, -1), (10, 1), (6, 1), (30, 1),
            (17, -1), (9, 1), (5, 1), (29, 1), (3, -1), (27, -1), (23, -1), (15, 1),
        ],
        [
            (16, 1), (8, -1), (4, -1), (28, -1), (2, 1), (26, 1), (22, 1), (14, -1),
            (1, 1), (25, 1), (21, 1), (13, -1), (19, -1), (11, 1), (7, 1), (31, 1),
        ],
    ),
    // term 14
    (
        [
            (0, 1), (24, 1), (20, 1), (12, -1), (18, -1), (10, 1), (6, 1), (30, 1),
            (17, 1), (9, -1), (5, -1), (29, -1), (3, 1), (27, 1), (23, 1), (15, -1),
        ],
        [
            (16, 1), (8, -1), (4, -1), (28, -1), (2, 1), (26, 1), (22, 1), (14, -1),
            (1, -1), (25, -1), (21, -1), (13, 1), (19, 1), (11, -1), (7, -1), (31, -1),
        ],
    ),
    // term 15
    (
        [
            (0, 1), (24, 1), (20, 1), (12, -1), (18, 1), (10, -1), (6, -1), (30, -1),
            (17, -1), (9, 1), (5, 1), (29, 1), (3, 1), (27, 1), (23, 1), (15, -1),
        ],
        [
            (16, 1), (8, -1), (4, -1), (28, -1), (2, -1), (26, -1), (22, -1), (14, 1),
            (1, 1), (25, 1), (21, 1), (13, -1), (19, 1), (11, -1), (7, -1), (31, -1),
        ],
    ),
    // term 16
    (
        [
            (0, 1), (24, 1), (20, 1), (12, -1), (18, 1), (10, -1), (6, -1), (30, -1),
            (17, 1), (25, -1), (21, -1), (29, -1), (3, -1), (27, -1), (23, -1), (15, 1),
        ],
        [
            (16, 1), (8, -1), (4, -1), (28, -1), (2, -1), (26, -1), (22, -1), (14, 1),
            (1, -1), (25, -1), (21, -1), (13, 1), (19, -1), (11, 1), (7, 1), (31, 1),
        ],
    ),
];

/// The published sign tables, copied literally: 4 rows with prefactor 1/16
/// for n = 3, 16 rows with prefactor 1/256 for n = 5.
pub fn transcribed_table(n: usize) -> Result<SignTable> {
    match n {
        3 => SignTable::with_rows(
            3,
            THREE_TERMS
                .iter()
                .map(|(a, b)| SignRow {
                    a_terms: a.to_vec(),
                    b_terms: b.to_vec(),
                })
                .collect(),
        ),
        5 => SignTable::with_rows(
            5,
            FIVE_TERMS
                .iter()
                .map(|(a, b)| SignRow {
                    a_terms: a.to_vec(),
                    b_terms: b.to_vec(),
                })
                .collect(),
        ),
        _ => Err(Error::Unsupported {
            n,
            reason: "published tables exist for three and five qubits only",
        }),
    }
}

/// Rebuilds the closed-form table from the structural rule the published
/// rows obey. Rows are indexed by sign vectors s in {+1,-1}^n with s_1 = +1,
/// enumerated by a binary counter c on (s_2, …, s_n); the sign of index x in
/// row c is (-1)^{floor(weight(x)/2)} * (-1)^{popcount(x AND c)}, with
/// even-weight indices collected into A and odd into B, ascending. For
/// n outside {2, 3, 5} the result is a conjectural extension of the
/// published family, and callers are expected to label it as such.
pub fn generate_table(n: usize) -> Result<SignTable> {
    if !(2..=MAX_TABLE_QUBITS).contains(&n) {
        return Err(Error::Unsupported {
            n,
            reason: "generated tables cover two through ten qubits",
        });
    }
    let dim = 1usize << n;
    let rows = (0..1usize << (n - 1))
        .map(|c| {
            let mut a_terms = Vec::with_capacity(dim / 2);
            let mut b_terms = Vec::with_capacity(dim / 2);
            for x in 0..dim {
                let w = x.count_ones();
                let base = if (w / 2) % 2 == 0 { 1i8 } else { -1i8 };
                let flip = if (x & c).count_ones() % 2 == 0 { 1i8 } else { -1i8 };
                let term = (x, base * flip);
                if w % 2 == 0 {
                    a_terms.push(term);
                } else {
                    b_terms.push(term);
                }
            }
            SignRow { a_terms, b_terms }
        })
        .collect();
    SignTable::with_rows(n, rows)
}

/// Evaluates P = prefactor * [ sum_k sqrt(A_k^2 + B_k^2) ]^2 on a real
/// state. Complex amplitudes are rejected, not projected.
pub fn pmax_closed(state: &QState, table: &SignTable) -> Result<f64> {
    if state.n() != table.n() {
        return Err(Error::DimensionMismatch {
            expected: 1usize << table.n(),
            got: state.dim(),
        });
    }
    for (index, a) in state.amplitudes().iter().enumerate() {
        if a.im.abs() > REAL_INPUT_TOL {
            return Err(Error::ComplexInput { index, imag: a.im });
        }
    }
    let amps = state.amplitudes();
    let mut sum = 0.0f64;
    for row in table.rows() {
        let a: f64 = row
            .a_terms
            .iter()
            .map(|&(i, s)| f64::from(s) * amps[i].re)
            .sum();
        let b: f64 = row
            .b_terms
            .iter()
            .map(|&(i, s)| f64::from(s) * amps[i].re)
            .sum();
        sum += (a * a + b * b).sqrt();
    }
    Ok(table.prefactor() * sum * sum)
}

/// Cost of matching transcribed terms against a generated block under the
/// best global sign flip of the block (sqrt(A^2 + B^2) is blind to a global
/// flip, so flips are not divergences). Returns (divergence count, flip).
fn block_cost(terms: &[(usize, i8)], generated: &BTreeMap<usize, i8>) -> (usize, i8) {
    let mut best = (usize::MAX, 1i8);
    for flip in [1i8, -1] {
        let cost = terms
            .iter()
            .filter(|&&(i, s)| generated.get(&i).is_none_or(|&g| s * flip != g))
            .count();
        if cost < best.0 {
            best = (cost, flip);
        }
    }
    best
}

/// Compares a transcribed table against a generated one, modulo row
/// reordering and per-row global sign flips of the A and B blocks. Only
/// transcribed-side entries are scanned: an index the generator never emits
/// in that block is reported with `generated: 0`.
pub fn compare_tables(transcribed: &SignTable, generated: &SignTable) -> TranscriptionReport {
    let gen_rows: Vec<(BTreeMap<usize, i8>, BTreeMap<usize, i8>)> = generated
        .rows()
        .iter()
        .map(|r| (r.a_map(), r.b_map()))
        .collect();
    let mut taken = vec![false; gen_rows.len()];
    let mut mismatches = Vec::new();
    for (t_idx, t_row) in transcribed.rows().iter().enumerate() {
        // Greedy best-match: the generated row (not yet taken) with the
        // fewest divergences under optimal flips; ties go to the lowest row.
        let mut best: Option<(usize, usize, i8, i8)> = None;
        for (g_idx, (ga, gb)) in gen_rows.iter().enumerate() {
            if taken[g_idx] {
                continue;
            }
            let (cost_a, flip_a) = block_cost(&t_row.a_terms, ga);
            let (cost_b, flip_b) = block_cost(&t_row.b_terms, gb);
            let cost = cost_a + cost_b;
            if best.is_none_or(|(c, _, _, _)| cost < c) {
                best = Some((cost, g_idx, flip_a, flip_b));
            }
        }
        let (_, g_idx, flip_a, flip_b) = best.expect("tables have equal row counts");
        taken[g_idx] = true;
        let (ga, gb) = &gen_rows[g_idx];
        for (terms, gmap, flip) in [
            (&t_row.a_terms, ga, flip_a),
            (&t_row.b_terms, gb, flip_b),
        ] {
            for &(index, sign) in terms {
                match gmap.get(&index) {
                    None => mismatches.push(Mismatch {
                        row: t_idx + 1,
                        index,
                        transcribed: sign,
                        generated: 0,
                    }),
                    Some(&g) if sign * flip != g => mismatches.push(Mismatch {
                        row: t_idx + 1,
                        index,
                        transcribed: sign,
                        // Report in the transcribed row's sign convention.
                        generated: g * flip,
                    }),
                    Some(_) => {}
                }
            }
        }
    }
    let verdict = if mismatches.is_empty() {
        Verdict::Exact
    } else if mismatches.iter().all(|m| m.generated == 0) {
        Verdict::SuspectedTypos
    } else {
        Verdict::StructuralMismatch
    };
    TranscriptionReport {
        n: transcribed.n(),
        verdict,
        mismatches,
    }
}

/// Audits the published table for `n` against the structural generator.
pub fn verify_transcription(n: usize) -> Result<TranscriptionReport> {
    let transcribed = transcribed_table(n)?;
    let generated = generate_table(n)?;
    Ok(compare_tables(&transcribed, &generated))
}
