use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported dimension n = {0} (only n = 3 is supported here)")]
    UnsupportedDimension(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("arithmetic failure: {0}")]
    Arithmetic(String),

    #[error("certification failed in clause `{clause}`: {detail}")]
    Certification { clause: String, detail: String },

    #[error("malformed certificate: {0}")]
    Parse(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn certification(clause: &str, detail: impl Into<String>) -> Self {
        Error::Certification {
            clause: clause.to_string(),
            detail: detail.into(),
        }
    }
}
