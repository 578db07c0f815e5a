use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::metrics::{brier_score, uncertainty_coefficient, ConfusionMatrix};
use crate::codes::{
    dense_code_length, greedy_orthogonal_dense, harmonic_bound, harmonic_matrix, one_vs_one,
    one_vs_rest, orthogonal_with_zeros, random_dense, type2_params, CodingMatrix, MatrixKind,
};
use crate::decode::{self, SolverKind};
use crate::error::{Error, Result};
use crate::learners::{train_multiclass_with, Dataset, TrainOptions};
use crate::seed::{derive_seed, MATRIX_STREAM, SPLIT_STREAM};

/// Reseeded splits tried before giving up on a class missing from training.
pub const SPLIT_RETRIES: usize = 10;

/// Shuffles with `seed`; the first `floor(0.7 T)` samples train, the rest
/// test. If a class has no training sample the split is redrawn with a
/// derived seed, at most [`SPLIT_RETRIES`] times.
pub fn split_70_30(d: &Dataset, seed: u64) -> Result<(Dataset, Dataset)> {
    if d.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot split an empty dataset".into(),
        ));
    }
    let n_train = d.len() * 7 / 10;
    let mut missing = 0;
    for attempt in 0..=SPLIT_RETRIES {
        let s = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, attempt as u64)
        };
        let mut idx: Vec<usize> = (0..d.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
        let (train, test) = idx.split_at(n_train);
        let train = d.subset(train);
        match train.class_counts().iter().position(|&c| c == 0) {
            None => return Ok((train, d.subset(test))),
            Some(c) => missing = c,
        }
    }
    Err(Error::MissingClass {
        class: missing,
        retries: SPLIT_RETRIES,
    })
}

/// Coding-matrix family plus size parameter, as used by the trial protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFamily {
    OneVsOne,
    OneVsRest,
    /// `None` uses the dense orthogonal code length for `m`.
    RandomDense {
        n: Option<usize>,
    },
    OrthogonalDense,
    OrthogonalZeros,
    /// `None` picks the shortest length whose first `m` rows are admissible.
    Harmonic {
        n: Option<usize>,
    },
}

impl MatrixFamily {
    pub fn kind(self) -> MatrixKind {
        match self {
            MatrixFamily::OneVsOne => MatrixKind::OneVsOne,
            MatrixFamily::OneVsRest => MatrixKind::OneVsRest,
            MatrixFamily::RandomDense { .. } => MatrixKind::RandomDense,
            MatrixFamily::OrthogonalDense => MatrixKind::OrthogonalDense,
            MatrixFamily::OrthogonalZeros => MatrixKind::OrthogonalZeros,
            MatrixFamily::Harmonic { .. } => MatrixKind::Harmonic,
        }
    }

    /// Same family with an explicit code length; ignored by families whose
    /// length is fixed by `m`.
    pub fn with_codes(self, n: Option<usize>) -> Self {
        match self {
            MatrixFamily::RandomDense { .. } => MatrixFamily::RandomDense { n },
            MatrixFamily::Harmonic { .. } => MatrixFamily::Harmonic { n },
            other => other,
        }
    }

    /// Whether a fresh matrix is drawn for every seed.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            MatrixFamily::RandomDense { .. }
                | MatrixFamily::OrthogonalDense
                | MatrixFamily::OrthogonalZeros
        )
    }

    /// Builds the matrix for `m` classes.
    pub fn build(self, m: usize, seed: u64) -> Result<CodingMatrix> {
        match self {
            MatrixFamily::OneVsOne => one_vs_one(m),
            MatrixFamily::OneVsRest => one_vs_rest(m),
            MatrixFamily::RandomDense { n } => {
                random_dense(m, n.unwrap_or_else(|| dense_code_length(m)), seed)
            }
            MatrixFamily::OrthogonalDense => greedy_orthogonal_dense(m, seed),
            MatrixFamily::OrthogonalZeros => {
                Ok(orthogonal_with_zeros(type2_params(m)?, seed)?.matrix)
            }
            MatrixFamily::Harmonic { n: Some(n) } => harmonic_matrix(m, n),
            MatrixFamily::Harmonic { n: None } => {
                // the all-ones column disappears only once m > log2(n) + 2
                for t in 1..m.min(31) {
                    let n = 1usize << t;
                    if harmonic_bound(n).is_some_and(|b| b >= m) {
                        let a = harmonic_matrix(m, n)?;
                        if a.ensure_admissible().is_ok() {
                            return Ok(a);
                        }
                    }
                }
                Err(Error::InvalidArgument(format!(
                    "no harmonic matrix with admissible columns for {m} classes"
                )))
            }
        }
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())
    }
}

impl FromStr for MatrixFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.parse::<MatrixKind>()? {
            MatrixKind::OneVsOne => MatrixFamily::OneVsOne,
            MatrixKind::OneVsRest => MatrixFamily::OneVsRest,
            MatrixKind::RandomDense => MatrixFamily::RandomDense { n: None },
            MatrixKind::OrthogonalDense => MatrixFamily::OrthogonalDense,
            MatrixKind::OrthogonalZeros => MatrixFamily::OrthogonalZeros,
            MatrixKind::Harmonic => MatrixFamily::Harmonic { n: None },
            MatrixKind::Custom => {
                return Err(Error::InvalidArgument(
                    "custom matrices have no generator".into(),
                ))
            }
        })
    }
}

/// Metrics of one split/train/test trial.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub uncertainty_coefficient: f64,
    /// `None` for the vote solver, which yields no probabilities.
    pub brier_score: Option<f64>,
    pub accuracy: f64,
    /// Seconds to classify the test set: binary decisions plus decoding.
    pub total_time_s: f64,
    /// Seconds inside the decoder only.
    pub solution_time_s: f64,
    pub n_test: usize,
    pub n_codes: usize,
    pub seed: u64,
}

/// Split with `derive_seed(seed, 1)`, draw the matrix with
/// `derive_seed(seed, 2)`, train on 70%, classify the other 30%.
pub fn run_trial(
    d: &Dataset,
    family: MatrixFamily,
    solver: SolverKind,
    seed: u64,
) -> Result<EvalReport> {
    let (train, test) = split_70_30(d, derive_seed(seed, SPLIT_STREAM))?;
    let matrix = family.build(d.n_classes(), derive_seed(seed, MATRIX_STREAM))?;
    let model = train_multiclass_with(&train, &matrix, solver, &TrainOptions::default())?;

    let truth = test.labels();
    let mut preds = Vec::with_capacity(test.len());
    let mut probs = Vec::with_capacity(test.len());
    let mut solution = 0.0;
    let start = Instant::now();
    for s in test.samples() {
        let r = model.decisions(&s.features)?;
        let t0 = Instant::now();
        match solver {
            SolverKind::VoteOnly => preds.push(decode::vote(&matrix, &r)?),
            _ => {
                let p = decode::decode(solver, &matrix, &r)?;
                preds.push(p.argmax());
                probs.push(p.into_vec());
            }
        }
        solution += t0.elapsed().as_secs_f64();
    }
    let total = start.elapsed().as_secs_f64();

    let confusion = ConfusionMatrix::from_pairs(d.n_classes(), &truth, &preds)?;
    let brier = match solver {
        SolverKind::VoteOnly => None,
        _ => Some(brier_score(&probs, &truth)?),
    };
    Ok(EvalReport {
        uncertainty_coefficient: uncertainty_coefficient(&confusion)?,
        brier_score: brier,
        accuracy: confusion.accuracy()?,
        total_time_s: total,
        solution_time_s: solution.min(total),
        n_test: test.len(),
        n_codes: matrix.n_codes(),
        seed,
    })
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    /// `std` uses `n - 1` and is 0 for a single value.
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Stat { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub reports: Vec<EvalReport>,
    pub n_trials: usize,
    pub uncertainty_coefficient: Stat,
    pub brier_score: Option<Stat>,
    pub accuracy: Stat,
    pub total_time_s: Stat,
    pub solution_time_s: Stat,
}

impl ExperimentSummary {
    pub fn from_reports(reports: Vec<EvalReport>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InvalidArgument("no trials to summarise".into()));
        }
        let col = |f: fn(&EvalReport) -> f64| Stat::of(&reports.iter().map(f).collect::<Vec<_>>());
        let brier: Option<Vec<f64>> = reports.iter().map(|r| r.brier_score).collect();
        Ok(ExperimentSummary {
            n_trials: reports.len(),
            uncertainty_coefficient: col(|r| r.uncertainty_coefficient),
            brier_score: brier.map(|b| Stat::of(&b)),
            accuracy: col(|r| r.accuracy),
            total_time_s: col(|r| r.total_time_s),
            solution_time_s: col(|r| r.solution_time_s),
            reports,
        })
    }
}

/// Runs trials with seeds `base_seed + i`. With `threads > 0` trials run
/// concurrently (each trial's own pipeline stays sequential); reports are
/// ordered by trial index either way.
pub fn run_experiment(
    d: &Dataset,
    family: MatrixFamily,
    solver: SolverKind,
    n_trials: usize,
    base_seed: u64,
    threads: usize,
) -> Result<ExperimentSummary> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let trial = |i: usize| {
        run_trial(d, family, solver, base_seed.wrapping_add(i as u64)).map_err(|e| Error::Trial {
            trial: i,
            source: Box::new(e),
        })
    };
    let reports: Vec<EvalReport> = if threads == 0 {
        (0..n_trials).map(trial).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..n_trials)
                .into_par_iter()
                .map(trial)
                .collect::<Result<_>>()
        })?
    };
    ExperimentSummary::from_reports(reports)
}
