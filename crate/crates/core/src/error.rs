use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("input has length {got}, expected {expected}")]
    InputArity { expected: usize, got: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid float system: {0}")]
    InvalidSystem(String),
    #[error("value does not belong to the system: {0}")]
    Domain(String),
    #[error("malformed encoding: {0}")]
    Encoding(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
