//! Classifier evaluation: confusion matrices, macro-averaged metrics, fold
//! aggregation and the one-tailed two-sample Z-test on fold accuracies.

mod confusion;
mod metrics;
mod predictions;
mod ztest;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use confusion::{confusion_from_predictions, ConfusionMatrix};
pub use metrics::{aggregate_folds, metrics, ClassMetrics, MetricsReport};
pub use predictions::{
    classes_in, read_predictions_csv, write_predictions_csv, PredictionRecord, PREDICTIONS_HEADER,
};
pub use ztest::{read_accuracy_list, standard_normal_upper_quantile, ztest, Decision, ZTestResult};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no input records")]
    EmptyInput,
    #[error("label {0:?} is not in the class list")]
    UnknownLabel(String),
    #[error("need at least 2 samples per group, got {0}")]
    InsufficientSamples(usize),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("fold reports cover different class lists")]
    ClassMismatch,
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}
