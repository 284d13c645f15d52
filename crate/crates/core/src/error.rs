use thiserror::Error;

/// Errors raised by the phase-space machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: must be an odd prime")]
    UnsupportedDimension(i64),

    #[error("dimension {d} exceeds the configured maximum {max}")]
    DimensionTooLarge { d: u32, max: u32 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state is not normalized (trace {0})")]
    NotNormalized(f64),

    #[error("result is not real (max imaginary part {0:e})")]
    NotReal(f64),

    #[error("inconsistent subsystem dimensions: {0}")]
    InvalidDims(String),

    #[error("path enumeration needs {terms:e} terms, budget is {budget:e}; compose short-time kernels instead")]
    BudgetExceeded { terms: f64, budget: f64 },

    #[error("path endpoints do not match: {0}")]
    EndpointMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
