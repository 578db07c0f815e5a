use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix entry {value} at ({row}, {col}) is not one of -1, 0, +1")]
    InvalidEntry { row: usize, col: usize, value: i64 },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("coding matrix violates column restriction: {0}")]
    ColumnRestriction(String),

    #[error("{what} search gave up after {attempts} attempts ({draws} candidate draws)")]
    SearchExhausted {
        what: &'static str,
        attempts: usize,
        draws: usize,
    },

    #[error("{0} requires a dense orthogonal coding matrix (A A^T = n I)")]
    NotOrthogonal(&'static str),

    #[error("solver {solver} is not compatible with a {kind} coding matrix")]
    IncompatibleSolver { solver: String, kind: String },

    #[error("decision vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("column {column} cannot be trained: {reason}")]
    UntrainableColumn { column: usize, reason: String },

    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("the vote-only solver does not produce probabilities")]
    NoProbabilities,

    #[error("empty confusion matrix")]
    EmptyConfusion,

    #[error("class {class} is absent from the training split after {retries} reseeded splits")]
    MissingClass { class: usize, retries: usize },

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
