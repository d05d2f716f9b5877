use thiserror::Error;

/// Errors raised by model construction, evaluation and the oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid sample cloud: {0}")]
    InvalidSamples(String),

    /// Cholesky failed at `index`; the moment matrix is (numerically) rank deficient.
    #[error(
        "moment matrix is not positive definite (pivot {pivot:.3e} at row {index}, jitter {jitter:.3e})"
    )]
    NotPositiveDefinite { index: usize, pivot: f64, jitter: f64 },

    #[error("box width is zero; density estimation needs epsilon > 0")]
    ZeroWidth,

    #[error("box does not intersect the domain")]
    EmptyIntersection,

    #[error("gram matrix is singular or constraint vector vanishes")]
    SingularGram,

    #[error("quadrature did not converge (estimate {estimate:.6e}, error {error:.3e})")]
    NoConvergence { estimate: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
