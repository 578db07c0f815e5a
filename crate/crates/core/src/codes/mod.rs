//! Coding matrices: construction, validation and the plain-text matrix format.
//!
//! A coding matrix `A` has one row per class and one column per binary
//! classifier. Entry `a_ij` is `+1`/`-1` when class `i` is on the
//! positive/negative side of classifier `j`, and `0` when the class is left
//! out of that classifier's training set. All arithmetic on matrices here is
//! exact integer arithmetic.

mod families;
mod search;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use families::{harmonic_bound, harmonic_matrix, one_vs_one, one_vs_rest, random_dense};
pub use search::{
    dense_code_length, greedy_orthogonal_dense, orthogonal_with_zeros, prune_columns, type2_params,
    PrunedColumns, Type2Params, ZerosSearch, GREEDY_MAX_ATTEMPTS, GREEDY_MAX_DRAWS,
    ZEROS_MAX_DRAWS, ZEROS_STALL_DRAWS,
};

/// Family a coding matrix was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    OneVsOne,
    OneVsRest,
    RandomDense,
    OrthogonalDense,
    OrthogonalZeros,
    Harmonic,
    Custom,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 7] = [
        MatrixKind::OneVsOne,
        MatrixKind::OneVsRest,
        MatrixKind::RandomDense,
        MatrixKind::OrthogonalDense,
        MatrixKind::OrthogonalZeros,
        MatrixKind::Harmonic,
        MatrixKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::OneVsOne => "one-vs-one",
            MatrixKind::OneVsRest => "one-vs-rest",
            MatrixKind::RandomDense => "random",
            MatrixKind::OrthogonalDense => "ortho-dense",
            MatrixKind::OrthogonalZeros => "ortho-zeros",
            MatrixKind::Harmonic => "harmonic",
            MatrixKind::Custom => "custom",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown matrix kind `{s}`")))
    }
}

/// An `m x n` matrix over {-1, 0, +1}, stored row-major.
///
/// Construction only checks shape and entry values, so matrices read from
/// disk can be inspected with [`validate`] even when they break the column
/// restriction. Use [`CodingMatrix::ensure_admissible`] before training.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingMatrix {
    entries: Vec<i8>,
    n_classes: usize,
    n_codes: usize,
    kind: MatrixKind,
    dense_orthogonal: bool,
}

impl CodingMatrix {
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R], kind: MatrixKind) -> Result<Self> {
        let n_classes = rows.len();
        if n_classes == 0 {
            return Err(Error::Shape("coding matrix has no rows".into()));
        }
        let n_codes = rows[0].as_ref().len();
        if n_codes == 0 {
            return Err(Error::Shape("coding matrix has no columns".into()));
        }
        let mut entries = Vec::with_capacity(n_classes * n_codes);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_codes {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n_codes}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(Error::InvalidEntry {
                        row: i,
                        col: j,
                        value: v as i64,
                    });
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self::from_parts(entries, n_classes, n_codes, kind))
    }

    /// Builds a matrix from column vectors (each of length `m`).
    pub fn from_columns<C: AsRef<[i8]>>(columns: &[C], kind: MatrixKind) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("coding matrix has no columns".into()));
        }
        let m = columns[0].as_ref().len();
        if columns.iter().any(|c| c.as_ref().len() != m) {
            return Err(Error::Shape("columns have differing lengths".into()));
        }
        let rows: Vec<Vec<i8>> = (0..m)
            .map(|i| columns.iter().map(|c| c.as_ref()[i]).collect())
            .collect();
        Self::from_rows(&rows, kind)
    }

    fn from_parts(entries: Vec<i8>, n_classes: usize, n_codes: usize, kind: MatrixKind) -> Self {
        let mut a = CodingMatrix {
            entries,
            n_classes,
            n_codes,
            kind,
            dense_orthogonal: false,
        };
        a.dense_orthogonal = a.compute_dense_orthogonal();
        a
    }

    fn compute_dense_orthogonal(&self) -> bool {
        if self.entries.contains(&0) {
            return false;
        }
        let n = self.n_codes as i64;
        for i in 0..self.n_classes {
            for k in i..self.n_classes {
                let d = self.row_dot(i, k);
                if (i == k && d != n) || (i != k && d != 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_codes(&self) -> usize {
        self.n_codes
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Same entries, relabelled family.
    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }

    /// True when there are no zeros and `A A^T = n I` holds exactly.
    pub fn is_dense_orthogonal(&self) -> bool {
        self.dense_orthogonal
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n_codes + col]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n_codes..(i + 1) * self.n_codes]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> + '_ {
        self.entries.chunks_exact(self.n_codes)
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.n_classes).map(|i| self.get(i, j)).collect()
    }

    pub fn row_dot(&self, i: usize, k: usize) -> i64 {
        self.row(i)
            .iter()
            .zip(self.row(k))
            .map(|(&a, &b)| (a as i64) * (b as i64))
            .sum()
    }

    /// Exact `A A^T`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let m = self.n_classes;
        (0..m)
            .map(|i| (0..m).map(|k| self.row_dot(i, k)).collect())
            .collect()
    }

    /// `A r` in floating point.
    pub fn mul_vec(&self, r: &[f64]) -> Vec<f64> {
        debug_assert_eq!(r.len(), self.n_codes);
        self.rows()
            .map(|row| row.iter().zip(r).map(|(&a, &x)| a as f64 * x).sum())
            .collect()
    }

    /// `A^T p` in floating point.
    pub fn mul_transpose_vec(&self, p: &[f64]) -> Vec<f64> {
        debug_assert_eq!(p.len(), self.n_classes);
        let mut out = vec![0.0; self.n_codes];
        for (row, &pi) in self.rows().zip(p) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a as f64 * pi;
            }
        }
        out
    }

    /// Reorders rows so that new row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_classes {
            return Err(Error::Shape(format!(
                "permutation has length {}, matrix has {} rows",
                perm.len(),
                self.n_classes
            )));
        }
        let rows: Vec<&[i8]> = perm.iter().map(|&p| self.row(p)).collect();
        Self::from_rows(&rows, self.kind)
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let columns: Vec<Vec<i8>> = cols.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(&columns, self.kind)
    }

    /// Checks the constraints a matrix must satisfy before it can drive a
    /// set of binary classifiers: no all-zero row and every column holding
    /// both a +1 and a -1.
    pub fn ensure_admissible(&self) -> Result<()> {
        let report = validate(self);
        if let Some(&i) = report.zero_rows.first() {
            return Err(Error::ColumnRestriction(format!("row {i} is all zeros")));
        }
        if !report.mixed_sign_columns {
            return Err(Error::ColumnRestriction(format!(
                "columns {:?} do not contain both +1 and -1",
                report.constant_columns
            )));
        }
        Ok(())
    }
}

/// Result of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub n_classes: usize,
    pub n_codes: usize,
    /// Off-diagonal entries of the gram matrix are all zero.
    pub is_orthogonal: bool,
    /// Exact `A A^T`.
    pub gram: Vec<Vec<i64>>,
    /// Every column holds at least one +1 and one -1.
    pub mixed_sign_columns: bool,
    /// Pairs `(j, k)`, `j < k`, where column `k` equals column `j` or its negation.
    pub duplicate_columns: Vec<(usize, usize)>,
    /// Columns whose nonzero entries all share one sign (including all-zero columns).
    pub constant_columns: Vec<usize>,
    pub row_nonzero_counts: Vec<usize>,
    pub zero_rows: Vec<usize>,
}

impl ValidationReport {
    /// No zeros and gram equal to `n I`.
    pub fn is_dense_orthogonal(&self) -> bool {
        self.is_orthogonal
            && self.row_nonzero_counts.iter().all(|&c| c == self.n_codes)
            && self
                .gram
                .iter()
                .enumerate()
                .all(|(i, row)| row[i] == self.n_codes as i64)
    }

    /// Human-readable list of constraint violations; empty when admissible.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for &i in &self.zero_rows {
            v.push(format!("row {i} is all zeros"));
        }
        for &j in &self.constant_columns {
            v.push(format!("column {j} lacks a +1 or a -1"));
        }
        for &(j, k) in &self.duplicate_columns {
            v.push(format!("column {k} duplicates column {j} up to sign"));
        }
        v
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classes: {}", self.n_classes)?;
        writeln!(f, "codes: {}", self.n_codes)?;
        writeln!(f, "orthogonal: {}", self.is_orthogonal)?;
        writeln!(f, "dense_orthogonal: {}", self.is_dense_orthogonal())?;
        writeln!(f, "mixed_sign_columns: {}", self.mixed_sign_columns)?;
        let counts: Vec<String> = self
            .row_nonzero_counts
            .iter()
            .map(|c| c.to_string())
            .collect();
        writeln!(f, "row_nonzeros: {}", counts.join(" "))?;
        writeln!(f, "gram:")?;
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        let violations = self.violations();
        if violations.is_empty() {
            writeln!(f, "violations: none")
        } else {
            writeln!(f, "violations:")?;
            for v in violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Column scaled so its first nonzero entry is +1; columns equal up to sign
/// share a canonical form.
pub(crate) fn canonical_column(col: &[i8]) -> Vec<i8> {
    let sign = col.iter().copied().find(|&v| v != 0).unwrap_or(1);
    col.iter().map(|&v| v * sign).collect()
}

pub(crate) fn is_mixed_sign(col: &[i8]) -> bool {
    col.contains(&1) && col.contains(&-1)
}

/// Exact structural report for any coding matrix.
pub fn validate(a: &CodingMatrix) -> ValidationReport {
    let gram = a.gram();
    let m = a.n_classes();
    let is_orthogonal = (0..m).all(|i| (0..m).all(|k| i == k || gram[i][k] == 0));

    let mut constant_columns = Vec::new();
    let mut duplicate_columns = Vec::new();
    let mut seen: HashMap<Vec<i8>, usize> = HashMap::new();
    for j in 0..a.n_codes() {
        let col = a.column(j);
        if !is_mixed_sign(&col) {
            constant_columns.push(j);
        }
        if col.iter().all(|&v| v == 0) {
            continue;
        }
        match seen.get(&canonical_column(&col)) {
            Some(&first) => duplicate_columns.push((first, j)),
            None => {
                seen.insert(canonical_column(&col), j);
            }
        }
    }

    let row_nonzero_counts: Vec<usize> = a
        .rows()
        .map(|r| r.iter().filter(|&&v| v != 0).count())
        .collect();
    let zero_rows = row_nonzero_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(i, _)| i)
        .collect();

    ValidationReport {
        n_classes: m,
        n_codes: a.n_codes(),
        is_orthogonal,
        gram,
        mixed_sign_columns: constant_columns.is_empty(),
        duplicate_columns,
        constant_columns,
        row_nonzero_counts,
        zero_rows,
    }
}
