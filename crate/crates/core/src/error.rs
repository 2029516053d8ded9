use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// Arithmetic on an element outside an operation's domain (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid construction parameters for a field, space or group family.
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation would exceed the configured state budget.
    #[error("resource guard: {what} needs {needed} states, limit is {limit}")]
    Resource {
        what: String,
        needed: String,
        limit: u64,
    },

    /// Malformed input file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Some generator maps a block outside the block set.
    #[error("not an automorphism group: generator {generator} maps block {block:?} to a non-block")]
    NotAutomorphism { generator: usize, block: Vec<u32> },

    /// Families handled by order arithmetic only have no generators.
    #[error("arithmetic-only family: {0} has no explicit generators")]
    ArithmeticOnly(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
