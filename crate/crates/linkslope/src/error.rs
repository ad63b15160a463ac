use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps `Domain` to exit code 2 and `IndeterminateRank` to exit code 3;
/// everything else is treated as a usage or input problem.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("indeterminate rank: singular value gap {gap:.3e} below the required ratio (cutoff {cutoff:.3e})")]
    IndeterminateRank { gap: f64, cutoff: f64 },
    #[error("calibration unavailable: {0}")]
    Calibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
