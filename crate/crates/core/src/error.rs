use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data that cannot be turned into a valid domain object.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Point data in a dimension other than 2.
    #[error("unsupported dimension {0}, only planar (dim = 2) point sets are supported")]
    UnsupportedDimension(usize),

    /// A generator's predicted count disagreed with the exact recount.
    #[error("self-check failed for {name}: predicted {predicted}, counted {counted}")]
    SelfCheck {
        name: String,
        predicted: u64,
        counted: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
