use thiserror::Error;

/// Errors raised by the cube and Gaussian toolkits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate {index} out of range for dimension {n} (valid: 1..={n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("capacity exceeded: {what} (requested {requested}, limit {limit})")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
