use thiserror::Error;

/// Errors produced by corpus loading, vector operations, and the optimizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {msg}")]
    MalformedRecord {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: unknown artefact type code `{code}`")]
    UnknownType {
        path: String,
        line: usize,
        code: String,
    },

    #[error("{path}:{line}: duplicate artefact id `{id}`")]
    DuplicateId {
        path: String,
        line: usize,
        id: String,
    },

    #[error("invalid time window: start must precede end")]
    InvalidWindow,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("brute force would enumerate {subsets} subsets, exceeding the cap of {cap}")]
    EnumerationCap { subsets: u128, cap: u128 },

    #[error("sentence id ({artefact}, {index}) does not resolve in the corpus")]
    UnresolvableSid { artefact: String, index: u32 },

    #[error("empty sample passed to a statistical test")]
    EmptySample,

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
