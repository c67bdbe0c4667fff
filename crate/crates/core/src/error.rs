use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CtnnError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CtnnError {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("value {value} at index {index} is outside [{min}, {max}]")]
    OutOfRange {
        index: usize,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("digit {0} is out of range 0-9")]
    InvalidDigit(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("bad weight file magic: expected {expected:?}")]
    BadMagic { expected: &'static str },

    #[error("weight file topology mismatch: expected {expected:?}, found {found:?}")]
    TopologyMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("weight file truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("malformed file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CtnnError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CtnnError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CtnnError::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(CtnnError::LengthMismatch { expected, actual })
        }
    }
}
