use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient was requested beyond the certified truncation window.
    #[error("truncation too shallow: {0}")]
    Truncation(String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    /// Structural misuse of a coefficient domain (wrong kind, missing
    /// generator, non-invertible element of a non-field, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    /// An internal consistency check failed (these are hard failures, not
    /// report entries).
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn truncation(msg: impl Into<String>) -> Self {
        Error::Truncation(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
