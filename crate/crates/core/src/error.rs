use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("scoring failed for id {id}: {source}")]
    Score {
        id: String,
        #[source]
        source: ScoreError,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Problems with input data: pool files, result documents, tables.
#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch at id {id}: expected {expected}, found {found}")]
    DimensionMismatch {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("empty embedding at id {id}")]
    EmptyEmbedding { id: String },

    #[error("non-finite value at id {id}")]
    NonFinite { id: String },

    #[error("zero-norm embedding at id {id}")]
    ZeroNorm { id: String },

    #[error("duplicate id {id}")]
    DuplicateId { id: String },

    #[error("pool is empty")]
    EmptyPool,

    #[error("unknown id {id}")]
    UnknownId { id: String },

    #[error("missing label for id {id}")]
    MissingLabel { id: String },

    #[error("missing text for id {id}")]
    MissingText { id: String },

    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u64, expected: u64 },

    #[error("{0}")]
    Invalid(String),
}

/// Failures of a confidence scorer on a single query.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("transport failure: {0}")]
    Transport(String),

    #[error("malformed response: {0}")]
    Malformed(String),

    #[error("empty generation")]
    EmptyGeneration,

    #[error("{0} is not in the confidence table")]
    MissingEntry(String),
}
