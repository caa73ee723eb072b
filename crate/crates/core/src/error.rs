use thiserror::Error;

/// Errors raised by the numerical kernels and constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("non-finite entry at flat index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("mixture weights must be nonnegative and sum to 1 (sum = {sum})")]
    WeightSum { sum: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("map does not preserve Hermiticity (Choi defect {defect:.3e})")]
    NotHermiticityPreserving { defect: f64 },

    #[error("map {0} has no positivity certificate")]
    UncertifiedMap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
