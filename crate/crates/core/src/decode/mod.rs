//! Decoding binary decision values into class probabilities.
//!
//! Decision values follow the convention `r_j = P_j(+1|x) - P_j(-1|x)`, so
//! that a perfect set of binary classifiers satisfies `A^T p = r`. Every
//! decoder returns a point of the probability simplex; they differ in how
//! they solve
//!
//! ```text
//! minimise |A^T p - r|^2   subject to   sum p = 1,  p >= 0.
//! ```
//!
//! For dense orthogonal `A` (`A A^T = n I`) the objective equals
//! `n |p - A r / n|^2` plus a constant, so the answer is the simplex
//! projection of `A r / n`; that is the fast path.

mod lsq;
mod simplex;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::codes::{CodingMatrix, MatrixKind};
use crate::error::{Error, Result};

pub use lsq::{
    decode_constrained_lsq, decode_one_vs_one, KktSolution, LsqSolution, KKT_TOLERANCE, RIDGE,
};
pub use simplex::{simplex_adjust, simplex_adjust_traced};

/// Binary decision values, one per coding-matrix column.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    /// Accepts any finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(DecisionVector(values))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DecisionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Class probabilities: non-negative, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(pub(crate) Vec<f64>);

impl ProbabilityVector {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    /// Checks feasibility (`min >= 0`, `|sum - 1| <= 1e-12`).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if values.is_empty()
            || values.iter().any(|v| !v.is_finite() || *v < 0.0)
            || (sum - 1.0).abs() > Self::SUM_TOLERANCE
        {
            return Err(Error::InvalidArgument(format!(
                "not a probability vector: {values:?}"
            )));
        }
        Ok(ProbabilityVector(values))
    }

    pub fn uniform(m: usize) -> Self {
        ProbabilityVector(vec![1.0 / m as f64; m])
    }

    /// Index of the largest probability, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ProbabilityVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Which decoder turns decision values into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Simplex projection of `A r / n`; dense orthogonal matrices only.
    OrthogonalFast,
    /// Active-set constrained least squares; any matrix.
    ConstrainedLsq,
    /// Equality-constrained normal equations for one-vs-one matrices.
    OneVsOneKkt,
    /// `argmax A r`; no probabilities.
    VoteOnly,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [
        SolverKind::OrthogonalFast,
        SolverKind::ConstrainedLsq,
        SolverKind::OneVsOneKkt,
        SolverKind::VoteOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::OrthogonalFast => "fast",
            SolverKind::ConstrainedLsq => "lsq",
            SolverKind::OneVsOneKkt => "kkt",
            SolverKind::VoteOnly => "vote",
        }
    }

    /// Solver normally paired with a matrix family.
    pub fn default_for(kind: MatrixKind) -> SolverKind {
        match kind {
            MatrixKind::OneVsOne => SolverKind::OneVsOneKkt,
            MatrixKind::OrthogonalDense | MatrixKind::Harmonic => SolverKind::OrthogonalFast,
            _ => SolverKind::ConstrainedLsq,
        }
    }

    pub fn check_compatible(self, a: &CodingMatrix) -> Result<()> {
        let ok = match self {
            SolverKind::OrthogonalFast => a.is_dense_orthogonal(),
            SolverKind::OneVsOneKkt => is_pairwise(a),
            SolverKind::ConstrainedLsq | SolverKind::VoteOnly => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleSolver {
                solver: self.name().into(),
                kind: a.kind().name().into(),
            })
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solver `{s}`")))
    }
}

/// One-vs-one layout: every column has exactly one +1 and one -1.
pub(crate) fn is_pairwise(a: &CodingMatrix) -> bool {
    a.kind() == MatrixKind::OneVsOne
        || (0..a.n_codes()).all(|j| {
            let col = a.column(j);
            col.iter().filter(|&&v| v == 1).count() == 1
                && col.iter().filter(|&&v| v == -1).count() == 1
        })
}

pub(crate) fn check_input(a: &CodingMatrix, r: &[f64]) -> Result<()> {
    if r.len() != a.n_codes() {
        return Err(Error::LengthMismatch {
            expected: a.n_codes(),
            got: r.len(),
        });
    }
    if let Some((index, &value)) = r.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// `p0 = A r / n`, the unconstrained minimiser for dense orthogonal `A`.
/// May be negative or fail to sum to one.
pub fn unconstrained_orthogonal(a: &CodingMatrix, r: &[f64]) -> Result<Vec<f64>> {
    if !a.is_dense_orthogonal() {
        return Err(Error::NotOrthogonal("unconstrained_orthogonal"));
    }
    check_input(a, r)?;
    let n = a.n_codes() as f64;
    Ok(a.rows()
        .map(|row| row.iter().zip(r).map(|(&s, &x)| s as f64 * x).sum::<f64>() / n)
        .collect())
}

/// Fast path: simplex projection of `A r / n`.
pub fn decode_orthogonal(a: &CodingMatrix, r: &[f64]) -> Result<ProbabilityVector> {
    let mut p = unconstrained_orthogonal(a, r)?;
    if p.len() == 1 {
        return Ok(ProbabilityVector(vec![1.0]));
    }
    simplex::adjust_in_place(&mut p, |_| {});
    Ok(ProbabilityVector(p))
}

/// Class with the largest `(A r)_i`; lowest index on ties.
pub fn vote(a: &CodingMatrix, r: &[f64]) -> Result<usize> {
    check_input(a, r)?;
    Ok(argmax(&a.mul_vec(r)))
}

/// Decodes with the chosen solver.
pub fn decode(solver: SolverKind, a: &CodingMatrix, r: &[f64]) -> Result<ProbabilityVector> {
    match solver {
        SolverKind::OrthogonalFast => decode_orthogonal(a, r),
        SolverKind::ConstrainedLsq => decode_constrained_lsq(a, r).map(|s| s.probs),
        SolverKind::OneVsOneKkt => decode_one_vs_one(a, r).map(|s| s.probs),
        SolverKind::VoteOnly => Err(Error::NoProbabilities),
    }
}
