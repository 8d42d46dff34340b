use thiserror::Error;

/// Failure modes shared by every operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad vertex, bad subset, violated precondition.
    #[error("input error: {0}")]
    Input(String),
    /// A configured search cap was exceeded; the answer is unknown, not false.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
