use rayon::prelude::*;

use super::dataset::{Dataset, Features, Standardizer};
use super::logistic::{train_logistic, LogisticModel, LogisticParams};
use crate::codes::CodingMatrix;
use crate::decode::{self, ProbabilityVector, SolverKind};
use crate::error::{Error, Result};

/// Binary problem defined by one coding-matrix column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLabeling {
    column: usize,
    /// Per class: `+1`, `-1`, or `0` for classes left out.
    sign: Vec<i8>,
}

impl BinaryLabeling {
    /// Column `j` of `a`; it must hold both a `+1` and a `-1`.
    pub fn from_column(a: &CodingMatrix, j: usize) -> Result<Self> {
        if j >= a.n_codes() {
            return Err(Error::InvalidArgument(format!(
                "column {j} out of range for {} codes",
                a.n_codes()
            )));
        }
        let sign = a.column(j);
        if !sign.contains(&1) || !sign.contains(&-1) {
            return Err(Error::UntrainableColumn {
                column: j,
                reason: "column lacks a +1 or a -1".into(),
            });
        }
        Ok(BinaryLabeling { column: j, sign })
    }

    pub fn column(&self) -> usize {
        self.column
    }

    pub fn included(&self, class: usize) -> bool {
        self.sign[class] != 0
    }

    pub fn sign(&self, class: usize) -> i8 {
        self.sign[class]
    }
}

/// Samples of a binary problem: indices into the source dataset and `+-1`
/// targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPartition {
    pub indices: Vec<usize>,
    pub targets: Vec<i8>,
}

/// Keeps samples of classes with a nonzero entry, labelled by that entry.
/// Fails when the kept samples do not cover both sides.
pub fn partition_dataset(d: &Dataset, labeling: &BinaryLabeling) -> Result<BinaryPartition> {
    if labeling.sign.len() != d.n_classes() {
        return Err(Error::Shape(format!(
            "labeling covers {} classes, dataset has {}",
            labeling.sign.len(),
            d.n_classes()
        )));
    }
    let mut indices = Vec::new();
    let mut targets = Vec::new();
    for (t, s) in d.samples().iter().enumerate() {
        let v = labeling.sign[s.label];
        if v != 0 {
            indices.push(t);
            targets.push(v);
        }
    }
    if !targets.contains(&1) || !targets.contains(&-1) {
        return Err(Error::UntrainableColumn {
            column: labeling.column,
            reason: "training samples cover only one side".into(),
        });
    }
    Ok(BinaryPartition { indices, targets })
}

/// Training switches for [`train_multiclass_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrainOptions {
    pub params: LogisticParams,
    /// Worker threads for column training; 0 trains sequentially.
    pub threads: usize,
}

/// A coding matrix, one logistic model per column, the decoder, and the
/// feature standardisation fitted on the training data.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    pub(crate) matrix: CodingMatrix,
    pub(crate) binaries: Vec<LogisticModel>,
    pub(crate) solver: SolverKind,
    pub(crate) standardizer: Standardizer,
    pub(crate) class_names: Option<Vec<String>>,
}

impl MulticlassModel {
    pub fn new(
        matrix: CodingMatrix,
        binaries: Vec<LogisticModel>,
        solver: SolverKind,
        standardizer: Standardizer,
        class_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if binaries.len() != matrix.n_codes() {
            return Err(Error::Shape(format!(
                "{} binaries for {} columns",
                binaries.len(),
                matrix.n_codes()
            )));
        }
        let nf = standardizer.n_features();
        if binaries.iter().any(|b| b.weights().len() != nf) {
            return Err(Error::Shape(format!(
                "binary weights must have {nf} entries"
            )));
        }
        if let Some(names) = &class_names {
            if names.len() != matrix.n_classes() {
                return Err(Error::Shape(
                    "one class name per matrix row required".into(),
                ));
            }
        }
        solver.check_compatible(&matrix)?;
        Ok(MulticlassModel {
            matrix,
            binaries,
            solver,
            standardizer,
            class_names,
        })
    }

    pub fn matrix(&self) -> &CodingMatrix {
        &self.matrix
    }

    pub fn binaries(&self) -> &[LogisticModel] {
        &self.binaries
    }

    pub fn solver(&self) -> SolverKind {
        self.solver
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    pub fn class_names(&self) -> Option<&[String]> {
        self.class_names.as_deref()
    }

    pub fn n_features(&self) -> usize {
        self.standardizer.n_features()
    }

    /// Decision values of every binary on raw (unstandardised) features.
    pub fn decisions(&self, x: &Features) -> Result<Vec<f64>> {
        x.check_dim(self.n_features())?;
        let z = self.standardizer.transform(x);
        Ok(self.binaries.iter().map(|b| b.decision(&z)).collect())
    }

    /// Decodes precomputed decision values with the model's solver.
    pub fn decode(&self, r: &[f64]) -> Result<ProbabilityVector> {
        decode::decode(self.solver, &self.matrix, r)
    }

    pub fn predict_proba(&self, x: &Features) -> Result<ProbabilityVector> {
        self.decode(&self.decisions(x)?)
    }

    /// Most probable class, lowest index on ties; the vote solver uses
    /// `argmax A r` directly.
    pub fn predict_class(&self, x: &Features) -> Result<usize> {
        let r = self.decisions(x)?;
        match self.solver {
            SolverKind::VoteOnly => decode::vote(&self.matrix, &r),
            _ => Ok(self.decode(&r)?.argmax()),
        }
    }
}

/// [`train_multiclass_with`] under default options.
pub fn train_multiclass(
    d: &Dataset,
    a: &CodingMatrix,
    solver: SolverKind,
) -> Result<MulticlassModel> {
    train_multiclass_with(d, a, solver, &TrainOptions::default())
}

/// Standardises features on `d`, then trains one logistic model per column
/// of `a`. Columns are independent and deterministic, so threaded and
/// sequential training give identical models.
pub fn train_multiclass_with(
    d: &Dataset,
    a: &CodingMatrix,
    solver: SolverKind,
    opts: &TrainOptions,
) -> Result<MulticlassModel> {
    if a.n_classes() != d.n_classes() {
        return Err(Error::Shape(format!(
            "matrix has {} classes, dataset has {}",
            a.n_classes(),
            d.n_classes()
        )));
    }
    solver.check_compatible(a)?;
    let standardizer = Standardizer::fit(d);
    let rows: Vec<Vec<f64>> = d
        .samples()
        .iter()
        .map(|s| standardizer.transform(&s.features))
        .collect();

    let train_column = |j: usize| -> Result<LogisticModel> {
        let labeling = BinaryLabeling::from_column(a, j)?;
        let part = partition_dataset(d, &labeling)?;
        let x: Vec<&[f64]> = part.indices.iter().map(|&t| rows[t].as_slice()).collect();
        train_logistic(&x, &part.targets, opts.params).map_err(|e| match e {
            Error::UntrainableColumn { .. } => e,
            other => Error::UntrainableColumn {
                column: j,
                reason: other.to_string(),
            },
        })
    };

    let binaries: Vec<LogisticModel> = if opts.threads == 0 {
        (0..a.n_codes()).map(train_column).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..a.n_codes())
                .into_par_iter()
                .map(train_column)
                .collect::<Result<_>>()
        })?
    };
    MulticlassModel::new(
        a.clone(),
        binaries,
        solver,
        standardizer,
        d.class_names().map(<[String]>::to_vec),
    )
}
