use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid token {0:?}: tokens are non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("invalid example: {0}")]
    InvalidExample(&'static str),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed rule store at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported rule store version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },

    #[error("invalid rule in store: {0}")]
    InvalidRule(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
