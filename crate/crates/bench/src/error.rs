use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("confusion matrix has no counts")]
    Empty,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] qlin_core::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        BenchError::Io { path: path.into(), message: err.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
