use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("iterative decomposition did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("kraus operators are not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("kraus operator shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("top schmidt coefficient deviates from one (got {value})")]
    TopCoefficientDeviation { value: f64 },

    #[error("optimizer is not unique: second coefficient {mu2} ties with third {mu3}")]
    DegenerateOptimizer { mu2: f64, mu3: f64 },

    #[error("state has no correlation; optimizers are undefined")]
    NoCorrelation,

    #[error("common-data witness construction failed: {0}")]
    WitnessConstructionFailed(String),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("distribution has a zero marginal")]
    ZeroMarginal,

    #[error("distribution has a zero diagonal entry")]
    ZeroDiagonal,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
