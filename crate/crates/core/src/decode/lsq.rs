//! Least-squares decoders for general coding matrices.
//!
//! With `Q = A A^T` and `c = A r` the objective is
//! `f(p) = p^T Q p - 2 c^T p + |r|^2`, gradient `g = 2 (Q p - c)`.

use super::simplex::adjust_in_place;
use super::{check_input, is_pairwise, ProbabilityVector, SolverKind};
use crate::codes::CodingMatrix;
use crate::error::{Error, Result};
use crate::linalg::solve_in_place;

/// Diagonal ridge, relative to the largest diagonal entry of `2 Q`, added
/// when an equality-constrained system is singular.
pub const RIDGE: f64 = 1e-10;

/// Optimality threshold on the bound multipliers.
pub const KKT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LsqSolution {
    pub probs: ProbabilityVector,
    /// Active-set iterations performed.
    pub iterations: usize,
    /// Some subproblem was singular and solved with [`RIDGE`].
    pub degenerate: bool,
    /// KKT conditions held on exit; `false` means the `10 m` cap was hit.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    pub probs: ProbabilityVector,
    /// Solution of the equality-constrained system before clipping. Sums to
    /// one but may have negative entries.
    pub raw: Vec<f64>,
    /// `raw` had a negative entry and was projected onto the simplex.
    pub clipped: bool,
    pub degenerate: bool,
}

struct Problem {
    m: usize,
    q: Vec<f64>,
    c: Vec<f64>,
}

impl Problem {
    fn new(a: &CodingMatrix, r: &[f64]) -> Self {
        let m = a.n_classes();
        let mut q = vec![0.0; m * m];
        for i in 0..m {
            for k in i..m {
                let v = a.row_dot(i, k) as f64;
                q[i * m + k] = v;
                q[k * m + i] = v;
            }
        }
        Problem {
            m,
            q,
            c: a.mul_vec(r),
        }
    }

    /// Minimises `f` over `{p : sum p = 1, p_i = 0 for i not in free}`.
    /// Returns the free coordinates, the multiplier of the sum constraint and
    /// whether a ridge was needed.
    fn solve_equality(&self, free: &[usize]) -> (Vec<f64>, f64, bool) {
        let k = free.len();
        let dim = k + 1;
        let build = |ridge: f64| {
            let mut mat = vec![0.0; dim * dim];
            let mut rhs = vec![0.0; dim];
            for (a, &i) in free.iter().enumerate() {
                for (b, &j) in free.iter().enumerate() {
                    mat[a * dim + b] = 2.0 * self.q[i * self.m + j];
                }
                mat[a * dim + a] += ridge;
                mat[a * dim + k] = 1.0;
                mat[k * dim + a] = 1.0;
                rhs[a] = 2.0 * self.c[i];
            }
            rhs[k] = 1.0;
            (mat, rhs)
        };
        let (mut mat, mut rhs) = build(0.0);
        let mut degenerate = false;
        if !solve_in_place(&mut mat, &mut rhs, dim) {
            degenerate = true;
            let diag = free
                .iter()
                .fold(1.0f64, |acc, &i| acc.max(2.0 * self.q[i * self.m + i]));
            (mat, rhs) = build(RIDGE * diag);
            let solved = solve_in_place(&mut mat, &mut rhs, dim);
            debug_assert!(solved);
        }
        let lambda = rhs[k];
        rhs.truncate(k);
        (rhs, lambda, degenerate)
    }

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| {
                let qp: f64 = (0..self.m).map(|j| self.q[i * self.m + j] * p[j]).sum();
                2.0 * (qp - self.c[i])
            })
            .collect()
    }
}

fn finish(mut p: Vec<f64>) -> ProbabilityVector {
    for v in &mut p {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let s: f64 = p.iter().sum();
    for v in &mut p {
        *v /= s;
    }
    ProbabilityVector(p)
}

/// Minimises `|A^T p - r|^2` over the probability simplex with a primal
/// active-set method.
///
/// The working set `W` holds coordinates pinned at zero. Each iteration
/// solves the equality-constrained problem on the complement; a step that
/// would leave the simplex stops at the first blocking coordinate, which
/// joins `W`. At a subproblem optimum the coordinate of `W` with the most
/// negative multiplier `g_i + lambda` is released. The start point is the
/// simplex projection of the full equality-constrained solution.
pub fn decode_constrained_lsq(a: &CodingMatrix, r: &[f64]) -> Result<LsqSolution> {
    check_input(a, r)?;
    let m = a.n_classes();
    if m == 1 {
        return Ok(LsqSolution {
            probs: ProbabilityVector(vec![1.0]),
            iterations: 0,
            degenerate: false,
            converged: true,
        });
    }
    let prob = Problem::new(a, r);
    let all: Vec<usize> = (0..m).collect();
    let (mut p, _, mut degenerate) = prob.solve_equality(&all);
    adjust_in_place(&mut p, |_| {});
    let mut in_w: Vec<bool> = p.iter().map(|&v| v <= 0.0).collect();

    let max_iter = 10 * m;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let free: Vec<usize> = (0..m).filter(|&i| !in_w[i]).collect();
        let (x, lambda, deg) = prob.solve_equality(&free);
        degenerate |= deg;

        let blocking = free
            .iter()
            .zip(&x)
            .filter(|(&i, &xi)| xi < 0.0 && xi < p[i])
            .map(|(&i, &xi)| (i, p[i] / (p[i] - xi)))
            .min_by(|u, v| u.1.total_cmp(&v.1));

        if let Some((block, alpha)) = blocking {
            for (&i, &xi) in free.iter().zip(&x) {
                p[i] += alpha * (xi - p[i]);
            }
            p[block] = 0.0;
            in_w[block] = true;
            continue;
        }

        for (&i, &xi) in free.iter().zip(&x) {
            p[i] = xi;
        }
        let g = prob.gradient(&p);
        let release = (0..m)
            .filter(|&i| in_w[i])
            .map(|i| (i, g[i] + lambda))
            .filter(|&(_, mu)| mu < -KKT_TOLERANCE)
            .min_by(|u, v| u.1.total_cmp(&v.1));
        match release {
            Some((i, _)) => in_w[i] = false,
            None => {
                converged = true;
                break;
            }
        }
    }
    Ok(LsqSolution {
        probs: finish(p),
        iterations,
        degenerate,
        converged,
    })
}

/// Solves the normal equations of `|A^T p - r|^2` under `sum p = 1` only,
/// then projects onto the simplex if the solution has a negative entry.
/// Requires a pairwise (one-vs-one) matrix.
pub fn decode_one_vs_one(a: &CodingMatrix, r: &[f64]) -> Result<KktSolution> {
    check_input(a, r)?;
    let m = a.n_classes();
    if m == 1 {
        return Ok(KktSolution {
            probs: ProbabilityVector(vec![1.0]),
            raw: vec![1.0],
            clipped: false,
            degenerate: false,
        });
    }
    if !is_pairwise(a) {
        return Err(Error::IncompatibleSolver {
            solver: SolverKind::OneVsOneKkt.name().into(),
            kind: a.kind().name().into(),
        });
    }
    let prob = Problem::new(a, r);
    let all: Vec<usize> = (0..m).collect();
    let (raw, _, degenerate) = prob.solve_equality(&all);
    let clipped = raw.iter().any(|&v| v < 0.0);
    let mut p = raw.clone();
    adjust_in_place(&mut p, |_| {});
    Ok(KktSolution {
        probs: ProbabilityVector(p),
        raw,
        clipped,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{harmonic_matrix, one_vs_one, one_vs_rest, MatrixKind};
    use crate::decode::decode_orthogonal;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn saturates_at_vertex() {
        let a = CodingMatrix::from_rows(&[[1], [-1]], MatrixKind::Custom).unwrap();
        let s = decode_constrained_lsq(&a, &[2.0]).unwrap();
        assert!(close(&s.probs, &[1.0, 0.0], 1e-12), "{:?}", s.probs);
        assert!(s.converged);
    }

    #[test]
    fn one_vs_rest_two_classes() {
        let a = one_vs_rest(2).unwrap();
        let s = decode_constrained_lsq(&a, &[0.4, -0.4]).unwrap();
        assert!(close(&s.probs, &[0.7, 0.3], 1e-12), "{:?}", s.probs);
    }

    #[test]
    fn agrees_with_fast_path_on_harmonic() {
        let a = harmonic_matrix(6, 8).unwrap();
        let r = [0.9, -0.3, 0.1, 0.5, -0.8, 0.2, 0.0, -0.6];
        let s = decode_constrained_lsq(&a, &r).unwrap();
        let f = decode_orthogonal(&a, &r).unwrap();
        assert!(close(&s.probs, &f, 1e-8));
    }

    #[test]
    fn kkt_two_classes() {
        let a = one_vs_one(2).unwrap();
        let s = decode_one_vs_one(&a, &[0.4]).unwrap();
        assert!(close(&s.probs, &[0.7, 0.3], 1e-12));
        assert!(!s.clipped);
    }

    #[test]
    fn kkt_round_trip() {
        let a = one_vs_one(3).unwrap();
        let r = a.mul_transpose_vec(&[0.5, 0.3, 0.2]);
        let s = decode_one_vs_one(&a, &r).unwrap();
        assert!(close(&s.probs, &[0.5, 0.3, 0.2], 1e-10));
    }

    #[test]
    fn kkt_unanimous_and_clipped() {
        let a = one_vs_one(3).unwrap();
        let s = decode_one_vs_one(&a, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.probs.argmax(), 0);
        // raw = [1, 1/3, -1/3]
        assert!(s.clipped);
        assert!(close(&s.raw, &[1.0, 1.0 / 3.0, -1.0 / 3.0], 1e-12));
        assert!(s.probs.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn kkt_rejects_other_layouts() {
        let a = one_vs_rest(3).unwrap();
        assert!(matches!(
            decode_one_vs_one(&a, &[0.0; 3]),
            Err(Error::IncompatibleSolver { .. })
        ));
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let a = CodingMatrix::from_rows(&[[0, 0], [0, 0], [0, 0]], MatrixKind::Custom).unwrap();
        let s = decode_constrained_lsq(&a, &[0.3, 0.1]).unwrap();
        assert!(s.degenerate);
        assert!((s.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
