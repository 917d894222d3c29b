use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{qubits} qubits exceed the configured simulation cap of {cap}")]
    CapacityExceeded { qubits: usize, cap: usize },

    #[error("gate {0} has no parameter-shift rule")]
    NoShiftRule(String),

    #[error("column `{0}` not found")]
    ColumnNotFound(String),

    #[error("row {row}: cannot parse `{value}` as a number")]
    Parse { row: usize, value: String },

    #[error("file {0} contains no data rows")]
    EmptyFile(PathBuf),

    #[error("word `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),

    #[error("actual value at index {0} is zero; relative error undefined")]
    ZeroActual(usize),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
