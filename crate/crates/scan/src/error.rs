use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Model(#[from] floquet_complexity::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl ScanError {
    /// 1 for usage, config, parameter and I/O problems; 2 when a numerical
    /// invariant is violated.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScanError::Invariant(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, ScanError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(ScanError::Usage(msg.into()))
}
