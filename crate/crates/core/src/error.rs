use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("Gram matrices of sources and targets differ by {deviation:.3e} (tolerance {tol:.1e})")]
    GramMismatch { deviation: f64, tol: f64 },

    #[error("not a SIC: overlap {overlap:.12} between vectors {i} and {j}, expected {expected:.12}")]
    NotSic {
        i: usize,
        j: usize,
        overlap: f64,
        expected: f64,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("completeness invariant violated: sum of effects deviates from identity by {deviation:.3e}")]
    NotComplete { deviation: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("sample {index} at m = {m}: {source}")]
    Sample {
        m: usize,
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
