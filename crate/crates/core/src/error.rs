use thiserror::Error;

/// Errors raised by the numerical routines and model constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),

    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("degenerate spectrum: gap {gap:e} between levels {level} and {} is below threshold", level + 1)]
    DegenerateSpectrum { level: usize, gap: f64 },

    #[error("biorthonormality violated (max deviation {residual:e}, tolerance {tolerance:e})")]
    NotBiorthonormal { residual: f64, tolerance: f64 },

    #[error("basis is degenerate: {0}")]
    DegenerateBasis(String),

    #[error("operator is not cryptohermitian with respect to the metric (residual {residual:e}, tolerance {tolerance:e})")]
    NotCryptohermitian { residual: f64, tolerance: f64 },

    #[error("level {level} out of range for dimension {dim}: {reason}")]
    LevelOutOfRange {
        level: usize,
        dim: usize,
        reason: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
