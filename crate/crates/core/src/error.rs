use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// ν ≤ 1: the branching process is (sub)critical.
    #[error("no Malthusian parameter exists for nu = {nu} (need nu > 1)")]
    NoMalthusian { nu: f64 },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("did not converge: {0}")]
    Convergence(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
