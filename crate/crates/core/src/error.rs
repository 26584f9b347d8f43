use thiserror::Error;

/// Errors returned by index construction, queries and index files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of bounds for length {len}")]
    OutOfBounds { pos: usize, len: usize },

    #[error("invalid range [{i}, {j}] for length {len}")]
    InvalidRange { i: usize, j: usize, len: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),

    #[error("corrupt index: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Checks `1 <= i <= j <= len`.
pub(crate) fn check_range(i: usize, j: usize, len: usize) -> Result<()> {
    if i == 0 || i > j || j > len {
        return Err(Error::InvalidRange { i, j, len });
    }
    Ok(())
}
