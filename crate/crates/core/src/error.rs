//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix shapes do not line up (non-square input, product dim mismatch).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (bad mode index, occupation mismatch, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A matrix failed its unitarity check.
    #[error("not unitary: max-norm residual of U†U − I is {residual:.3e}, tolerance {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    /// Input incompatible with the requested statistics model.
    #[error("model violation: {0}")]
    ModelViolation(String),

    /// Exact algorithm invoked beyond its practical size bound.
    #[error("size guard: {0}")]
    SizeGuard(String),

    /// Enumeration would exceed the state-count guard.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(#[from] serde_json::Error),
}
