use thiserror::Error;

/// Errors reported by the laboratory's operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    /// An input failed validation (malformed point, violated precondition).
    #[error("rejected input: {0}")]
    Rejected(String),
    /// The backend cannot perform the requested operation.
    #[error("unsupported on backend `{backend}`: {what}")]
    Unsupported { backend: &'static str, what: String },
}

impl LabError {
    pub fn rejected(msg: impl Into<String>) -> Self {
        LabError::Rejected(msg.into())
    }

    pub(crate) fn unsupported(backend: &'static str, what: impl Into<String>) -> Self {
        LabError::Unsupported {
            backend,
            what: what.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
