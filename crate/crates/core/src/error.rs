use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("cannot select {requested} chunks from {available} candidates")]
    Selection { requested: usize, available: usize },

    #[error("chunk index {index} outside 1..={universe}")]
    Index { index: usize, universe: usize },

    #[error("CSMAT1 format: {0}")]
    Format(String),

    #[error("prior support information: {0}")]
    PriorInfo(String),

    #[error("support generation: {0}")]
    Generation(String),

    #[error("enumerating {count} supports exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("block-RIP constant of order {order} is {delta}, outside [0, 1)")]
    RipViolation { order: usize, delta: f64 },

    #[error("bound precondition failed: {0}")]
    BoundPrecondition(String),

    #[error("metric: {0}")]
    Metric(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
