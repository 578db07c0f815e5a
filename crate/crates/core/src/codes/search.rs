//! Randomised searches for orthogonal coding matrices.
//!
//! Both searches grow a matrix one row at a time: a random candidate row is
//! kept when it is orthogonal to every row accepted so far. The dense search
//! never retries a candidate within an attempt; the search with zeros is a
//! memoryless brute force that restarts whenever a row stalls.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonical_column, is_mixed_sign, CodingMatrix, MatrixKind};
use crate::error::{Error, Result};

/// Candidate rows drawn per dense attempt.
pub const GREEDY_MAX_DRAWS: usize = 10_000;
/// Whole-matrix restarts for the dense search.
pub const GREEDY_MAX_ATTEMPTS: usize = 100;
/// Total candidate rows drawn by the search with zeros.
pub const ZEROS_MAX_DRAWS: usize = 1_000_000;
/// Consecutive rejected candidates after which a partial matrix is discarded.
pub const ZEROS_STALL_DRAWS: usize = 20_000;

/// Code length used by the dense search: the smallest multiple of 4 `>= m`.
pub fn dense_code_length(m: usize) -> usize {
    m.div_ceil(4).max(1) * 4
}

fn dot(a: &[i8], b: &[i8]) -> i32 {
    a.iter().zip(b).map(|(&x, &y)| x as i32 * y as i32).sum()
}

fn mask_to_row(mask: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|j| if (mask >> j) & 1 == 1 { 1 } else { -1 })
        .collect()
}

/// Source of never-repeated mixed-sign candidate rows for one attempt.
enum Candidates {
    /// Short codes: every mixed-sign row, in shuffled order.
    Enumerated { order: Vec<u64>, next: usize },
    /// Long codes: random draws filtered through a seen-set.
    Sampled { seen: HashSet<Vec<i8>> },
}

impl Candidates {
    fn new(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let total = if n < 63 { (1u64 << n) - 2 } else { u64::MAX };
        if total <= GREEDY_MAX_DRAWS as u64 {
            // masks 0 and 2^n - 1 are the constant rows
            let mut order: Vec<u64> = (1..(1u64 << n) - 1).collect();
            order.shuffle(rng);
            Candidates::Enumerated { order, next: 0 }
        } else {
            Candidates::Sampled {
                seen: HashSet::new(),
            }
        }
    }

    /// Next unseen candidate, or `None` once the pool is exhausted.
    fn next(&mut self, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<i8>> {
        match self {
            Candidates::Enumerated { order, next } => {
                let mask = *order.get(*next)?;
                *next += 1;
                Some(mask_to_row(mask, n))
            }
            Candidates::Sampled { seen } => loop {
                let row: Vec<i8> = (0..n)
                    .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                    .collect();
                if !is_mixed_sign(&row) {
                    continue;
                }
                if seen.insert(row.clone()) {
                    return Some(row);
                }
                // a repeat still costs a draw
                return Some(Vec::new());
            },
        }
    }
}

fn columns_acceptable(rows: &[Vec<i8>], n: usize) -> bool {
    let mut seen = HashSet::with_capacity(n);
    (0..n).all(|j| {
        let col: Vec<i8> = rows.iter().map(|r| r[j]).collect();
        is_mixed_sign(&col) && seen.insert(canonical_column(&col))
    })
}

/// Dense (+-1) orthogonal coding matrix with `n = dense_code_length(m)`.
///
/// Each attempt draws up to [`GREEDY_MAX_DRAWS`] distinct mixed-sign
/// candidate rows and keeps those orthogonal to the rows already chosen.
/// A filled matrix is accepted only if every column is mixed-sign and no two
/// columns agree up to sign; otherwise the attempt is repeated, at most
/// [`GREEDY_MAX_ATTEMPTS`] times.
///
/// For `m = 2` and `m = 3` no such matrix exists at any length, so the
/// search always ends in [`Error::SearchExhausted`].
pub fn greedy_orthogonal_dense(m: usize, seed: u64) -> Result<CodingMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "orthogonal codes need at least 2 classes, got {m}"
        )));
    }
    let n = dense_code_length(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total_draws = 0;

    for _ in 0..GREEDY_MAX_ATTEMPTS {
        let mut candidates = Candidates::new(n, &mut rng);
        let mut rows: Vec<Vec<i8>> = Vec::with_capacity(m);
        let mut draws = 0;
        while rows.len() < m && draws < GREEDY_MAX_DRAWS {
            let Some(cand) = candidates.next(n, &mut rng) else {
                break;
            };
            draws += 1;
            if cand.is_empty() {
                continue;
            }
            if rows.iter().all(|r| dot(r, &cand) == 0) {
                rows.push(cand);
            }
        }
        total_draws += draws;
        if rows.len() == m && columns_acceptable(&rows, n) {
            return CodingMatrix::from_rows(&rows, MatrixKind::OrthogonalDense);
        }
    }
    Err(Error::SearchExhausted {
        what: "dense orthogonal",
        attempts: GREEDY_MAX_ATTEMPTS,
        draws: total_draws,
    })
}

/// Size parameters for orthogonal matrices with zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Type2Params {
    n_classes: usize,
    initial_codes: usize,
    row_nonzeros: usize,
}

impl Type2Params {
    pub fn new(n_classes: usize, initial_codes: usize, row_nonzeros: usize) -> Result<Self> {
        if n_classes == 0 || initial_codes < n_classes {
            return Err(Error::InvalidArgument(format!(
                "need initial code length >= classes, got n0 = {initial_codes} for m = {n_classes}"
            )));
        }
        if row_nonzeros == 0 || row_nonzeros > initial_codes {
            return Err(Error::InvalidArgument(format!(
                "row nonzeros must lie in 1..={initial_codes}, got {row_nonzeros}"
            )));
        }
        Ok(Type2Params {
            n_classes,
            initial_codes,
            row_nonzeros,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn initial_codes(&self) -> usize {
        self.initial_codes
    }

    pub fn row_nonzeros(&self) -> usize {
        self.row_nonzeros
    }
}

const TYPE2_TABLE: [(usize, usize, usize); 6] = [
    (4, 7, 4),
    (6, 12, 6),
    (7, 15, 7),
    (8, 17, 8),
    (9, 20, 9),
    (10, 23, 10),
];

/// Tabulated `(n0, k)` for m in {4, 6, 7, 8, 9, 10}; otherwise
/// `n0 = round(m log2 m)` (at least `m + 1`) and `k = m`.
pub fn type2_params(m: usize) -> Result<Type2Params> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "orthogonal codes need at least 2 classes, got {m}"
        )));
    }
    if let Some(&(_, n0, k)) = TYPE2_TABLE.iter().find(|(mm, _, _)| *mm == m) {
        return Type2Params::new(m, n0, k);
    }
    let approx = (m as f64 * (m as f64).log2()).round() as usize;
    Type2Params::new(m, approx.max(m + 1), m)
}

/// Column indices kept and dropped by [`prune_columns`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrunedColumns {
    pub kept: Vec<usize>,
    pub zero: Vec<usize>,
    /// Nonzero columns whose entries share one sign.
    pub constant: Vec<usize>,
    /// Equal, up to sign, to an earlier kept column.
    pub duplicate: Vec<usize>,
}

impl PrunedColumns {
    pub fn removed(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self
            .zero
            .iter()
            .chain(&self.constant)
            .chain(&self.duplicate)
            .copied()
            .collect();
        r.sort_unstable();
        r
    }
}

/// Splits columns into those a binary classifier can use and those that are
/// empty, single-sided, or repeat an earlier column up to sign.
pub fn prune_columns(a: &CodingMatrix) -> PrunedColumns {
    let mut out = PrunedColumns::default();
    let mut seen = HashSet::new();
    for j in 0..a.n_codes() {
        let col = a.column(j);
        if col.iter().all(|&v| v == 0) {
            out.zero.push(j);
        } else if !is_mixed_sign(&col) {
            out.constant.push(j);
        } else if !seen.insert(canonical_column(&col)) {
            out.duplicate.push(j);
        } else {
            out.kept.push(j);
        }
    }
    out
}

/// Outcome of [`orthogonal_with_zeros`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZerosSearch {
    /// Pruned matrix used for classification.
    pub matrix: CodingMatrix,
    /// Matrix as found by the search: rows pairwise orthogonal, exactly
    /// `k` nonzeros per row.
    pub unpruned: CodingMatrix,
    pub pruned: PrunedColumns,
    pub attempts: usize,
    pub draws: usize,
}

/// Largest row weight for which sign patterns are enumerated exhaustively.
const SIGN_ENUM_MAX: usize = 16;

/// Candidate row with a uniform `k`-subset support, orthogonal to `rows`.
///
/// Supports with an odd overlap against an accepted row are rejected. For
/// `k <= SIGN_ENUM_MAX` the signs are uniform over the orthogonal sign
/// patterns; above that they are uniform and checked afterwards.
fn sparse_candidate(
    n: usize,
    k: usize,
    rows: &[Vec<i8>],
    rng: &mut ChaCha8Rng,
    idx: &mut [usize],
) -> Option<Vec<i8>> {
    let (chosen, _) = idx.partial_shuffle(rng, k);
    let support: Vec<usize> = chosen.to_vec();
    if rows
        .iter()
        .any(|r| support.iter().filter(|&&p| r[p] != 0).count() % 2 == 1)
    {
        return None;
    }
    let mut row = vec![0i8; n];
    if k > SIGN_ENUM_MAX {
        for &p in &support {
            row[p] = if rng.gen::<bool>() { 1 } else { -1 };
        }
        return rows.iter().all(|r| dot(r, &row) == 0).then_some(row);
    }
    // bit i of a pattern set means +1 at support[i]
    let masks: Vec<(u32, u32)> = rows
        .iter()
        .map(|r| {
            support
                .iter()
                .enumerate()
                .fold((0, 0), |(pos, neg), (i, &p)| match r[p] {
                    1 => (pos | 1 << i, neg),
                    -1 => (pos, neg | 1 << i),
                    _ => (pos, neg),
                })
        })
        .collect();
    let full: u32 = (1u32 << k) - 1;
    let valid: Vec<u32> = (0..=full)
        .filter(|&s| {
            masks.iter().all(|&(pos, neg)| {
                let agree = (s & pos).count_ones() + (!s & full & neg).count_ones();
                2 * agree == (pos | neg).count_ones()
            })
        })
        .collect();
    let &s = valid.choose(rng)?;
    for (i, &p) in support.iter().enumerate() {
        row[p] = if s >> i & 1 == 1 { 1 } else { -1 };
    }
    Some(row)
}

/// Orthogonal matrix with exactly `k` nonzeros per row, then pruned.
///
/// Rows are drawn one at a time by `sparse_candidate` without any memory
/// of earlier rejected draws. A partial matrix is thrown
/// away after [`ZEROS_STALL_DRAWS`] consecutive rejections; the whole search
/// fails after [`ZEROS_MAX_DRAWS`] draws. A completed matrix whose pruned
/// form has an all-zero row is discarded as well.
pub fn orthogonal_with_zeros(params: Type2Params, seed: u64) -> Result<ZerosSearch> {
    let (m, n, k) = (params.n_classes, params.initial_codes, params.row_nonzeros);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    let mut draws = 0;
    let mut attempts = 0;

    while draws < ZEROS_MAX_DRAWS {
        attempts += 1;
        let mut rows: Vec<Vec<i8>> = Vec::with_capacity(m);
        let mut stalled = 0;
        while rows.len() < m && stalled < ZEROS_STALL_DRAWS && draws < ZEROS_MAX_DRAWS {
            draws += 1;
            match sparse_candidate(n, k, &rows, &mut rng, &mut idx) {
                Some(cand) => {
                    rows.push(cand);
                    stalled = 0;
                }
                None => stalled += 1,
            }
        }
        if rows.len() < m {
            continue;
        }
        let unpruned = CodingMatrix::from_rows(&rows, MatrixKind::OrthogonalZeros)?;
        let pruned = prune_columns(&unpruned);
        if pruned.kept.is_empty() {
            continue;
        }
        let matrix = unpruned.select_columns(&pruned.kept)?;
        if matrix.rows().any(|r| r.iter().all(|&v| v == 0)) {
            continue;
        }
        return Ok(ZerosSearch {
            matrix,
            unpruned,
            pruned,
            attempts,
            draws,
        });
    }
    Err(Error::SearchExhausted {
        what: "orthogonal-with-zeros",
        attempts,
        draws,
    })
}
