//! Error type shared by all modules.

use std::path::PathBuf;

use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the library.
///
/// Numerical outcomes that merely miss a tolerance are *results* (carried in
/// certificates and reports), never errors; errors are reserved for violated
/// preconditions, structural mismatches and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with arguments outside its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two objects that must be compatible (ranks, shift maps) are not.
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// A function left its admissible domain (singular matrix, zero covector, off-manifold value).
    #[error("domain error: {0}")]
    Domain(String),

    /// The run configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Reading or writing a file failed.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The output directory is held by another run.
    #[error("output directory {0} is locked by another run")]
    Locked(PathBuf),

    /// Serialization of a report failed.
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Self::Precondition(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Self::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
