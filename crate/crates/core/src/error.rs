use thiserror::Error;

/// Errors raised by the analysis operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("iterative decomposition did not converge")]
    ConvergenceFailure,

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e} > {threshold:.3e})")]
    NotHermitian { residual: f64, threshold: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e} < {threshold:.3e})")]
    NotPositive { min_eigenvalue: f64, threshold: f64 },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("matrix is not idempotent (residual {residual:.3e} > {threshold:.3e})")]
    NotIdempotent { residual: f64, threshold: f64 },

    #[error("matrix is not an orthogonal projection")]
    NotHermitianProjection,

    #[error(
        "range inclusion fails (residual {residual:.3e} > {threshold:.3e}{})",
        if *.borderline { ", borderline" } else { "" }
    )]
    RangeNotIncluded {
        residual: f64,
        threshold: f64,
        /// Residual lies within ten times the threshold.
        borderline: bool,
    },

    #[error("the pair (A, S) is not compatible")]
    NotCompatible,

    #[error("operators have different ranges")]
    RangeMismatch,

    #[error("invalid tolerance profile: {0}")]
    InvalidTolerance(String),

    #[error("internal verification failed: {what} (residual {residual:.3e})")]
    VerificationFailed { what: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
