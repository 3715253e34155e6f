use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("wire format error: {0}")]
    Wire(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("survey error: {0}")]
    Survey(String),

    #[error("snapshot requested before quiescence: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
