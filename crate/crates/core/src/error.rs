use thiserror::Error;

/// Errors raised by operator construction and basis generation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("degenerate eigenvalues {0} and {1} (separation {2:e})")]
    Degenerate(usize, usize, f64),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("operator leaks out of the subspace (leakage {0:e})")]
    Stability(f64),

    #[error("construction error: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
