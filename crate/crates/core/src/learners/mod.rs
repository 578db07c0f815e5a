//! Logistic-regression binaries and their assembly into multi-class models.
//!
//! A [`MulticlassModel`] owns a coding matrix, one [`LogisticModel`] per
//! column, the decoder, and the feature standardisation fitted on the
//! training split. Binary decision values follow the decoder convention
//! `r = P(+1|x) - P(-1|x) = 2 sigmoid(w.x + b) - 1`.

mod dataset;
mod logistic;
mod model_file;
mod multiclass;

pub use dataset::{Dataset, Features, Sample, Standardizer};
pub use logistic::{train_logistic, LogisticModel, LogisticParams};
pub use multiclass::{
    partition_dataset, train_multiclass, train_multiclass_with, BinaryLabeling, BinaryPartition,
    MulticlassModel, TrainOptions,
};
