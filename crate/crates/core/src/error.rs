use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KneeError {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("at least two objectives are required, got {0}")]
    TooFewObjectives(usize),

    #[error("dimension mismatch: expected {expected} objectives, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("{method} needs {requirement}")]
    Unsupported { method: &'static str, requirement: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, KneeError>;

impl KneeError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        KneeError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
