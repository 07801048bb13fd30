use thiserror::Error;

/// Errors raised by circuit construction, simulation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing required parameter `{0}`")]
    MissingParameter(String),

    #[error("unsupported mapping: {0}")]
    UnsupportedMapping(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::MissingParameter(_) | Error::UnsupportedMapping(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
