//! Multi-class classification with error-correcting output codes, built
//! around orthogonal coding matrices.
//!
//! * [`codes`] builds and checks coding matrices.
//! * [`decode`] turns binary decision values into class probabilities.
//! * [`learners`] trains logistic-regression binaries and assembles them.
//! * [`eval`] runs the split/train/test protocol and computes skill scores.
//! * [`cli`] is the command-line front end and file formats.

pub mod cli;
pub mod codes;
pub mod decode;
pub mod error;
pub mod eval;
pub mod learners;
mod linalg;
pub mod seed;

pub use codes::{validate, CodingMatrix, MatrixKind, ValidationReport};
pub use decode::{DecisionVector, ProbabilityVector, SolverKind};
pub use error::{Error, Result};
