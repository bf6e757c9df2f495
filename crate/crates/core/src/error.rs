use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. Each variant maps to a CLI exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: String, reason: String },
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("inconsistent hypotheses: {0}")]
    Consistency(String),
    #[error("degenerate probe: {0}")]
    DegenerateProbe(String),
    #[error("precision not reached: {0}")]
    Precision(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::Parameter { field: field.to_string(), reason: reason.into() }
    }

    /// 0 ok, 2 config, 3 domain, 4 precision.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Config(_) | Error::Io(_) => 2,
            Error::Precision(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
