//! JSON-configured jobs: train, evaluate, predict, generate data, inspect.

mod config;
mod runner;

pub use config::{
    CorpusSource, CsvSource, DataSection, DataSource, ExperimentConfig, ModelKind, ModelSection, ModelSpec,
    OutputSection,
};
pub use runner::{
    grad_check, inspect, prepare_data, run_eval, run_predict, run_synth, run_train, run_train_with, AnyModel, GradCheckReport,
    PredictInput, PreparedData, Task, TrainOutcome, CHECKPOINT_FILE, HISTORY_FILE, METRICS_FILE, PREDICTIONS_BASE,
};
