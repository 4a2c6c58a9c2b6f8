use thiserror::Error;

/// Errors produced by population construction, clustering, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A population or algorithm specification is internally inconsistent.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Sampling from a population failed (e.g. fewer observations than subgroups).
    #[error("sampling error: {0}")]
    Sampling(String),

    /// The requested linkage/metric pairing is not implemented.
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    /// A dissimilarity could not be computed (e.g. cosine distance to a zero vector).
    #[error("undefined distance: {0}")]
    UndefinedDistance(String),

    /// A validity score is undefined for the given partition
    /// (e.g. silhouette with fewer than two effective clusters).
    #[error("undefined score: {0}")]
    UndefinedScore(String),

    /// Mismatched input dimensions.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Configuration file could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    /// Input data could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
