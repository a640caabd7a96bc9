use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("symbol {0} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("tape is not in canonical form: {0}")]
    NotCanonical(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("corrupt block library: {0}")]
    CorruptLibrary(String),
    #[error("construction bug: {0}")]
    Construction(String),
    #[error("decoder did not reach a canonical point within {0} steps")]
    Stuck(u64),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
