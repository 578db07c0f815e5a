//! Closed-form and randomly sampled coding-matrix families.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonical_column, is_mixed_sign, CodingMatrix, MatrixKind};
use crate::error::{Error, Result};

/// Largest class count a harmonic matrix of length `n` can hold: `2 log2 n`.
pub fn harmonic_bound(n: usize) -> Option<usize> {
    if n < 2 || !n.is_power_of_two() {
        return None;
    }
    Some(2 * n.trailing_zeros() as usize)
}

/// Square-wave ("harmonic") orthogonal matrix with `n = 2^t` columns.
///
/// Rows, in order: the all-ones row; `t` square waves of period
/// `n, n/2, ..., 2` (value -1 on the first half of each period); then `t - 1`
/// quarter-period-shifted waves of period `n, ..., 4`, each the product of
/// two neighbouring square waves with alternating sign (+, -, +, ...). All
/// rows are distinct Walsh functions up to sign, hence pairwise orthogonal.
/// The first `m` rows are returned.
///
/// The column restriction is not enforced here: below the row bound some
/// columns can be constant (e.g. `m = 1`), which [`super::validate`] reports.
pub fn harmonic_matrix(m: usize, n: usize) -> Result<CodingMatrix> {
    let bound = harmonic_bound(n).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "harmonic code length {n} is not a power of two >= 2"
        ))
    })?;
    if m == 0 || m > bound {
        return Err(Error::InvalidArgument(format!(
            "harmonic matrix with n = {n} holds 1..={bound} classes, got {m}"
        )));
    }
    let t = n.trailing_zeros() as usize;
    let wave = |bit: usize, j: usize| -> i8 {
        if (j >> bit) & 1 == 1 {
            1
        } else {
            -1
        }
    };

    let mut rows: Vec<Vec<i8>> = Vec::with_capacity(bound);
    rows.push(vec![1; n]);
    for bit in (0..t).rev() {
        rows.push((0..n).map(|j| wave(bit, j)).collect());
    }
    for (k, bit) in (1..t).rev().enumerate() {
        let sign: i8 = if k % 2 == 0 { 1 } else { -1 };
        rows.push(
            (0..n)
                .map(|j| sign * wave(bit, j) * wave(bit - 1, j))
                .collect(),
        );
    }
    rows.truncate(m);
    CodingMatrix::from_rows(&rows, MatrixKind::Harmonic)
}

/// One column per unordered class pair `(i, j)`, `i < j`, in lexicographic
/// order: `+1` at row `i`, `-1` at row `j`, zeros elsewhere.
pub fn one_vs_one(m: usize) -> Result<CodingMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "one-vs-one needs at least 2 classes, got {m}"
        )));
    }
    let mut columns = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let mut col = vec![0i8; m];
            col[i] = 1;
            col[j] = -1;
            columns.push(col);
        }
    }
    CodingMatrix::from_columns(&columns, MatrixKind::OneVsOne)
}

/// Column `j` is `+1` for class `j` and `-1` for every other class.
pub fn one_vs_rest(m: usize) -> Result<CodingMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "one-vs-rest needs at least 2 classes, got {m}"
        )));
    }
    let rows: Vec<Vec<i8>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1 } else { -1 }).collect())
        .collect();
    CodingMatrix::from_rows(&rows, MatrixKind::OneVsRest)
}

/// Number of mixed-sign +-1 columns of height `m`, counted up to negation:
/// `2^(m-1) - 1`. `None` when it does not fit in a `usize`.
pub(crate) fn admissible_dense_columns(m: usize) -> Option<usize> {
    if m == 0 {
        return Some(0);
    }
    1usize.checked_shl((m - 1) as u32).map(|p| p - 1)
}

/// `n` columns drawn uniformly from the mixed-sign +-1 vectors of height
/// `m`, rejecting repeats and negated repeats.
pub fn random_dense(m: usize, n: usize, seed: u64) -> Result<CodingMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "random codes need at least 2 classes, got {m}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("random codes need n >= 1".into()));
    }
    if let Some(avail) = admissible_dense_columns(m) {
        if n > avail {
            return Err(Error::InvalidArgument(format!(
                "only {avail} distinct mixed-sign columns exist for {m} classes, asked for {n}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    while columns.len() < n {
        let col: Vec<i8> = (0..m)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        if !is_mixed_sign(&col) {
            continue;
        }
        if seen.insert(canonical_column(&col)) {
            columns.push(col);
        }
    }
    CodingMatrix::from_columns(&columns, MatrixKind::RandomDense)
}
