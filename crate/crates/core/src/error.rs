use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the clustering toolkit.
///
/// Variants fall into two classes: input errors (bad files, malformed or
/// inconsistent data) and numeric domain errors (an operation was asked to
/// do something mathematically undefined). [`Error::is_input`] tells them
/// apart, which the CLI maps onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: {reason}")]
    Domain { what: &'static str, reason: String },

    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("row {row} has zero norm; cosine similarity is undefined")]
    ZeroNorm { row: usize },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("length mismatch: {features} feature rows but {labels} labels")]
    LengthMismatch { features: usize, labels: usize },

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{format} output is not supported for {what}")]
    UnsupportedFormat {
        format: &'static str,
        what: &'static str,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's input (files, shapes, labels)
    /// rather than by a numerically undefined request.
    pub fn is_input(&self) -> bool {
        !matches!(
            self,
            Error::Domain { .. } | Error::DimensionMismatch { .. } | Error::ZeroNorm { .. }
        )
    }
}
