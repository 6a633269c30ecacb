use thiserror::Error;

/// Errors raised across the library.
///
/// Resource errors are deliberately separate from invalid input so that the
/// CLI can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("mismatched trees: {0}")]
    TreeMismatch(String),

    #[error("not a tree automorphism: {0}")]
    IllegalPortrait(String),

    #[error("too large: {what} would need {needed}, cap is {cap}")]
    TooLarge {
        what: String,
        needed: String,
        cap: String,
    },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("group is not abelian")]
    NotAbelian,

    #[error("degree sequence rejected at index {index}: {reason}")]
    BadSequence { index: usize, reason: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no usable primes: {0}")]
    NoGoodPrimes(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn too_large(what: impl Into<String>, needed: impl ToString, cap: impl ToString) -> Self {
        Error::TooLarge {
            what: what.into(),
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }
}
