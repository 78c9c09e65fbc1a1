use thiserror::Error;

use crate::dsl::ParseError;
use crate::tables::TableViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("invalid Nielsen move: {0}")]
    InvalidMove(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("group is infinite")]
    InfiniteGroup,

    #[error("invalid group table: {0}")]
    InvalidTable(#[from] TableViolation),

    #[error("unknown built-in sentence `{0}`")]
    UnknownSentence(String),

    #[error("tuple does not generate the group")]
    NotGenerating,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cap(requested: u128, cap: u128) -> Self {
        Error::CapExceeded { requested, cap }
    }
}
