use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A configured size cap was exceeded. Nothing is truncated silently.
    #[error("{what}: size {size} exceeds the configured maximum {max}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An internal consistency check failed. This always indicates an
    /// arithmetic bug, never bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn check_size(what: &'static str, size: usize, max: usize) -> Result<()> {
        if size > max {
            Err(Error::SizeLimit { what, size, max })
        } else {
            Ok(())
        }
    }
}
