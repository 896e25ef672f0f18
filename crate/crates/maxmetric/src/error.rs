use thiserror::Error;

use crate::algebra::ValidationReport;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("structure constants do not define a Lie algebra:\n{0}")]
    Validation(ValidationReport),

    #[error("inner product is not symmetric positive definite")]
    InvalidInnerProduct,

    #[error("operation requires the identity Gram matrix; change basis first")]
    NonIdentityGram,

    #[error("matrix is singular")]
    Singular,

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("matrix is not an orthogonal automorphism: {0}")]
    NotAutomorphism(String),

    #[error("invalid flow problem: {0}")]
    InvalidFlow(String),
}
