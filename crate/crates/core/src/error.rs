use thiserror::Error;

/// Errors raised by the linear algebra, geometry and construction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// `ker(A)` is not contained in `ker(B)`, so no transport map from `A` to `B` exists.
    #[error("kernel of the source is not contained in the kernel of the target: |B v| = {leak:e} exceeds {bound:e}")]
    KernelNotIncluded { leak: f64, bound: f64 },

    #[error("non-finite value encountered at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("at least {required} samples are required, got {got}")]
    InsufficientSamples { required: usize, got: usize },
}

pub type Result<T, E = BwError> = std::result::Result<T, E>;
