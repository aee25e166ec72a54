use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("induction is only defined on irreducible data")]
    NonIrreducible,

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("block {block} of the grouping mixes {what}")]
    MixedTypeBlock { block: usize, what: &'static str },

    #[error("k = {k} is out of range for n = {n} (need 1 <= k <= n-1)")]
    BadK { k: usize, n: usize },

    #[error("n = {n} is not supported: {reason}")]
    BadN { n: usize, reason: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("every block of the ordered partition is empty")]
    AllEmpty,

    #[error("move {step} cannot be realized: {reason}")]
    Unrealizable { step: usize, reason: String },

    #[error("enumeration over {n} unresolved letters exceeds the configured bound of {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
