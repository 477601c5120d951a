use thiserror::Error;

use crate::vector::RecordId;

/// Errors raised by the clustering primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("feature vector must have at least one attribute")]
    EmptyVector,

    #[error("non-finite value {value} at attribute {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("no data to cluster")]
    EmptyData,

    #[error("k must satisfy 1 <= k <= {n}, got {k}")]
    InvalidK { k: usize, n: usize },

    #[error("max_iterations must be at least 1")]
    InvalidMaxIterations,

    #[error("explicit init supplies {found} centers but k = {k}")]
    InitCount { k: usize, found: usize },

    #[error("only {distinct} distinct records available for k = {k}")]
    NotEnoughDistinct { k: usize, distinct: usize },

    #[error("every cluster in the model is empty")]
    AllClustersEmpty,

    #[error("model must contain at least one cluster")]
    NoClusters,

    #[error("record {0} already present")]
    DuplicateRecord(RecordId),

    #[error("unknown record {0}")]
    UnknownRecord(RecordId),
}
