use thiserror::Error;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// An internal consistency check failed (a theorem was violated).
    Invariant,
    /// A size cap or work budget was hit.
    Capacity,
    /// Malformed textual input.
    Parse,
    /// Any other precondition or I/O failure.
    Other,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group closure exceeded the element cap of {cap}")]
    Capacity { cap: usize },

    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unresolved dependencies: {}", .0.join("; "))]
    Unresolved(Vec<String>),

    #[error("search bound exceeded: {0}")]
    SearchBound(String),

    #[error("work budget exhausted after {examined} polynomials; checkpoint written to {checkpoint}")]
    Budget { examined: u64, checkpoint: String },

    #[error("interrupted; checkpoint written to {0}")]
    Interrupted(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Invariant(_) => ErrorKind::Invariant,
            Error::Capacity { .. } | Error::Budget { .. } | Error::SearchBound(_) => ErrorKind::Capacity,
            Error::Parse { .. } => ErrorKind::Parse,
            _ => ErrorKind::Other,
        }
    }

    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn pre(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
