use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("construction infeasible: {0}")]
    Construction(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    Cap { what: String, needed: u128, cap: u128 },
    #[error("arithmetic overflow in {0}")]
    Overflow(String),
    #[error("formula error: {0}")]
    Formula(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
