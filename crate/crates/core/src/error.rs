use thiserror::Error;

/// Errors raised by the cost model, its lookups and its loaders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lookup key (HEPA class, region, unit id) is not present.
    #[error("{kind} not found: {key}")]
    NotFound { kind: &'static str, key: String },

    /// An argument is outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A file could not be parsed at all (missing header, unreadable input).
    /// Per-row problems are reported through [`crate::ingest::ParseReport`].
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn not_found(kind: &'static str, key: impl Into<String>) -> Self {
        Error::NotFound {
            kind,
            key: key.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
