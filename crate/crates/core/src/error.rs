use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("undecided at precision cap: {0}")]
    Undecided(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("ambiguous fit: {message} (retry with at least {suggested_terms} terms)")]
    Ambiguous {
        message: String,
        suggested_terms: usize,
    },
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
