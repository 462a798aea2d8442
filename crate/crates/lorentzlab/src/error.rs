use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inconsistent sizes between matrices, vectors or coordinates.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A parameter is outside its admissible range (e.g. q ≥ 1, N ≤ 1).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An input violates a documented precondition; the message names a witness.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Evaluation outside the domain of a function (e.g. a non-causal vector).
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation is not supported for this kind of object.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An iterative procedure did not reach its target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed text input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range for {len} points")]
    Index { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::Index { index, len })
    }
}
