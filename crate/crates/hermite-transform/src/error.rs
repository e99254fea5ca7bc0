//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by quadrature construction, transforms, special-function
/// evaluation, file I/O and the PDE solver.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain a routine is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two buffers that must agree in length do not.
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    /// The iterative eigensolver failed to drive an off-diagonal entry to
    /// negligible size within the sweep budget.
    #[error("eigenvalue {index} failed to converge after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    /// An extended-precision computation could not certify the requested
    /// accuracy.
    #[error("precision failure: {0}")]
    Precision(String),

    /// A non-finite value appeared during time stepping.
    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },

    /// A file or byte stream is not a valid serialized transform.
    #[error("format error: {0}")]
    Format(String),

    /// An underlying I/O operation failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
