use thiserror::Error;

/// Errors raised by the numerical kernels and sweep drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QedError {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("index error: {0}")]
    Index(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParameter { name: String, msg: String },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl QedError {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        QedError::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn param(name: impl Into<String>, msg: impl Into<String>) -> Self {
        QedError::InvalidParameter {
            name: name.into(),
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for QedError {
    fn from(e: std::io::Error) -> Self {
        QedError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QedError>;
