use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is malformed (non-finite entries, length mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested combination has no implementation (e.g. no closed form).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An argument falls outside a tabulated grid or validated range.
    #[error("out of range: {0}")]
    Range(String),

    /// Newton iteration for the boundary-value problem failed to converge.
    #[error("no convergence after {iterations} Newton iterations (residual norm {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    /// Two histograms or curves cannot be combined.
    #[error("configuration mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
