use thiserror::Error;

/// Errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the range the operation accepts, or an
    /// enumeration would exceed the configured guard.
    #[error("bounds error: {0}")]
    Bounds(String),

    /// A resource guard (enumeration size, q limit) was exceeded.
    #[error("resource guard exceeded: {0}")]
    Guard(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("sentence mentions constant a{needed} but the state description has only {available} constants")]
    InsufficientConstants { needed: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid simplex vector: {0}")]
    InvalidSimplex(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported function family: {0}")]
    UnsupportedFamily(String),

    #[error("malformed function spec: {0}")]
    MalformedSpec(String),

    #[error("singular matrix")]
    Singular,

    #[error("no regular tau table found after trying {tried}")]
    RegularitySearch { tried: String },

    #[error("internal verification mismatch: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}
