use thiserror::Error;

/// Failures are either malformed input or a violated mathematical precondition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Math(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) => 1,
            Error::Math(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn math<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Math(msg.into()))
}
