//! Accuracy metrics, the classical baseline and result export.

mod baseline;
mod export;
mod metrics;

pub use baseline::{baseline_rnn_forward, BaselineConfig, BaselineRnn};
pub use export::{export_predictions, read_predictions_csv};
pub use metrics::{
    classification_accuracy, prediction_accuracy, relative_errors, MetricsReport, MIN_ABS_ACTUAL,
};

#[cfg(test)]
mod tests;
