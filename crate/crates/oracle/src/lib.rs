//! Slow reference solvers for cross-checking the `ortho-ecoc` decoders.
//!
//! Nothing here shares code with the decoders under test: the simplex
//! projection is the sort-and-threshold formula, and the least-squares
//! decoder is plain projected gradient descent.

use ortho_ecoc::{CodingMatrix, ProbabilityVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    Config(String),

    #[error("input length {got}, expected {expected}")]
    Length { expected: usize, got: usize },

    #[error("projected gradient stopped after {iterations} iterations with gradient-mapping norm {residual:e}")]
    NotConverged {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error(transparent)]
    Core(#[from] ortho_ecoc::Error),
}

/// Euclidean projection onto the probability simplex.
///
/// Sort descending, find the largest `rho` with
/// `u_rho - (sum_{i<=rho} u_i - 1) / rho > 0`, subtract that threshold and
/// clip at zero.
pub fn project_simplex_by_sort(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    x.iter().map(|&v| (v - tau).max(0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    step_size: f64,
    max_iters: usize,
    tolerance: f64,
}

impl OracleConfig {
    pub fn new(step_size: f64, max_iters: usize, tolerance: f64) -> Result<Self, OracleError> {
        if !step_size.is_finite() || step_size <= 0.0 {
            return Err(OracleError::Config(format!("step size {step_size}")));
        }
        if max_iters == 0 {
            return Err(OracleError::Config("max_iters must be >= 1".into()));
        }
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(OracleError::Config(format!("tolerance {tolerance}")));
        }
        Ok(OracleConfig {
            step_size,
            max_iters,
            tolerance,
        })
    }

    /// Step `1 / (2 L)` where `L >= sigma_max(A)^2` is the smaller of
    /// `|A|_F^2` and `|A|_1 |A|_inf`; 100,000 iterations; tolerance 1e-9.
    pub fn for_matrix(a: &CodingMatrix) -> Self {
        let (m, n) = (a.n_classes(), a.n_codes());
        let frob: f64 = (0..m)
            .map(|i| a.row(i).iter().map(|&v| (v as f64).powi(2)).sum::<f64>())
            .sum();
        let max_row = (0..m)
            .map(|i| {
                a.row(i)
                    .iter()
                    .map(|&v| v.unsigned_abs() as f64)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let max_col = (0..n)
            .map(|j| {
                a.column(j)
                    .iter()
                    .map(|&v| v.unsigned_abs() as f64)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let bound = frob.min(max_row * max_col).max(1.0);
        OracleConfig {
            step_size: 1.0 / (2.0 * bound),
            max_iters: 100_000,
            tolerance: 1e-9,
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters.max(1);
        self
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// `|A^T p - r|^2`, summed column by column.
pub fn objective(a: &CodingMatrix, p: &[f64], r: &[f64]) -> f64 {
    (0..a.n_codes())
        .map(|j| {
            let col = a.column(j);
            let s: f64 = col.iter().zip(p).map(|(&c, &pi)| c as f64 * pi).sum();
            (s - r[j]).powi(2)
        })
        .sum()
}

fn gradient(a: &CodingMatrix, p: &[f64], r: &[f64]) -> Vec<f64> {
    let m = a.n_classes();
    let mut g = vec![0.0; m];
    for (j, &rj) in r.iter().enumerate() {
        let col = a.column(j);
        let resid: f64 = col
            .iter()
            .zip(p)
            .map(|(&c, &pi)| c as f64 * pi)
            .sum::<f64>()
            - rj;
        for (gi, &c) in g.iter_mut().zip(&col) {
            *gi += 2.0 * c as f64 * resid;
        }
    }
    g
}

/// Result of [`qp_decode_oracle_traced`].
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub probs: Vec<f64>,
    pub iterations: usize,
    /// Objective after each iteration, starting with the initial point.
    pub objectives: Vec<f64>,
}

/// Projected gradient on `|A^T p - r|^2` over the simplex, from the
/// uniform vector, until `|p - P(p - t g)| / t < tolerance`.
pub fn qp_decode_oracle(
    a: &CodingMatrix,
    r: &[f64],
    cfg: OracleConfig,
) -> Result<ProbabilityVector, OracleError> {
    let run = run(a, r, cfg, false)?;
    to_probability(run.probs)
}

/// As [`qp_decode_oracle`], recording the objective at every iterate.
pub fn qp_decode_oracle_traced(
    a: &CodingMatrix,
    r: &[f64],
    cfg: OracleConfig,
) -> Result<OracleRun, OracleError> {
    run(a, r, cfg, true)
}

fn to_probability(mut p: Vec<f64>) -> Result<ProbabilityVector, OracleError> {
    let s: f64 = p.iter().sum();
    for v in &mut p {
        *v /= s;
    }
    Ok(ProbabilityVector::new(p)?)
}

fn run(
    a: &CodingMatrix,
    r: &[f64],
    cfg: OracleConfig,
    trace: bool,
) -> Result<OracleRun, OracleError> {
    if r.len() != a.n_codes() {
        return Err(OracleError::Length {
            expected: a.n_codes(),
            got: r.len(),
        });
    }
    let m = a.n_classes();
    let t = cfg.step_size;
    let mut p = vec![1.0 / m as f64; m];
    let mut objectives = Vec::new();
    if trace {
        objectives.push(objective(a, &p, r));
    }
    let mut residual = f64::INFINITY;
    for it in 0..cfg.max_iters {
        let g = gradient(a, &p, r);
        let y: Vec<f64> = p.iter().zip(&g).map(|(pi, gi)| pi - t * gi).collect();
        let next = project_simplex_by_sort(&y);
        residual = next
            .iter()
            .zip(&p)
            .map(|(u, v)| (u - v).powi(2))
            .sum::<f64>()
            .sqrt()
            / t;
        p = next;
        if trace {
            objectives.push(objective(a, &p, r));
        }
        if residual < cfg.tolerance {
            return Ok(OracleRun {
                probs: p,
                iterations: it + 1,
                objectives,
            });
        }
    }
    Err(OracleError::NotConverged {
        iterations: cfg.max_iters,
        residual,
        best: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ortho_ecoc::MatrixKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn projection_examples() {
        assert!(close(
            &project_simplex_by_sort(&[0.9, 0.4, -0.3]),
            &[0.75, 0.25, 0.0],
            1e-15
        ));
        assert_eq!(project_simplex_by_sort(&[1.0, 0.0]), vec![1.0, 0.0]);
        assert_eq!(project_simplex_by_sort(&[-1.0, -1.0]), vec![0.5, 0.5]);
    }

    #[test]
    fn projection_variational_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = rng.gen_range(2..=12);
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let p = project_simplex_by_sort(&x);
            for _ in 0..100 {
                let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
                let s: f64 = raw.iter().sum();
                let q: Vec<f64> = raw.iter().map(|v| v / s).collect();
                let vi: f64 = (0..m).map(|i| (x[i] - p[i]) * (q[i] - p[i])).sum();
                assert!(vi <= 1e-10, "{vi}");
            }
        }
    }

    #[test]
    fn vertex_solution() {
        let a = CodingMatrix::from_rows(&[[1], [-1]], MatrixKind::Custom).unwrap();
        let p = qp_decode_oracle(&a, &[2.0], OracleConfig::for_matrix(&a)).unwrap();
        assert!(close(&p, &[1.0, 0.0], 1e-6));
    }

    #[test]
    fn exact_code_match() {
        let a = ortho_ecoc::codes::harmonic_matrix(6, 8).unwrap();
        for i in 0..6 {
            let r: Vec<f64> = a.row(i).iter().map(|&v| v as f64).collect();
            let p = qp_decode_oracle(&a, &r, OracleConfig::for_matrix(&a)).unwrap();
            let mut e = vec![0.0; 6];
            e[i] = 1.0;
            assert!(close(&p, &e, 1e-6));
        }
    }

    #[test]
    fn objective_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..20 {
            let a = ortho_ecoc::codes::random_dense(6, 10, seed).unwrap();
            let r: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let run = qp_decode_oracle_traced(&a, &r, OracleConfig::for_matrix(&a)).unwrap();
            for w in run.objectives.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let a = ortho_ecoc::codes::one_vs_one(4).unwrap();
        let cfg = OracleConfig::for_matrix(&a).with_max_iters(1);
        match qp_decode_oracle(&a, &[0.3, -0.2, 0.9, 0.1, -0.5, 0.4], cfg) {
            Err(OracleError::NotConverged {
                iterations, best, ..
            }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.len(), 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(0.0, 10, 1e-9).is_err());
        assert!(OracleConfig::new(0.1, 0, 1e-9).is_err());
        assert!(OracleConfig::new(0.1, 10, 0.0).is_err());
        assert!(OracleConfig::new(0.1, 10, 1e-9).is_ok());
    }
}
