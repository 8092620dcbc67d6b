use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed system, address, or array shape.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters outside the range where the construction is valid.
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("table incomplete: {0}")]
    TableIncomplete(String),
    #[error("section incomplete: {0}")]
    SectionIncomplete(String),
    /// An alignment that the modulus certificate promised could not be found.
    #[error("certified modulus violated: {0}")]
    ModulusViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
