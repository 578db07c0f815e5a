//! Skill scores, the 70/30 split protocol, and report formatting.
//!
//! A trial splits the data, draws a coding matrix, trains on the training
//! part and classifies the test part, timing the whole classification pass
//! and, separately, the decoder calls alone. An experiment repeats trials
//! with consecutive seeds and summarises each metric by mean and sample
//! standard deviation.

mod metrics;
mod protocol;
mod report;

pub use metrics::{brier_score, uncertainty_coefficient, ConfusionMatrix};
pub use protocol::{
    run_experiment, run_trial, split_70_30, EvalReport, ExperimentSummary, MatrixFamily, Stat,
    SPLIT_RETRIES,
};
pub use report::{labels_line, to_text, to_tsv, ReportHeader, TSV_FIELDS};
