use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("permutation not injective: column {0} assigned twice")]
    NotInjective(usize),

    #[error("column index {index} out of range 1..={max}")]
    ColumnOutOfRange { index: usize, max: usize },

    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("enumerating {count} injections exceeds cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },

    #[error("matrix parse error at line {line}, column {col}: {msg}")]
    MatrixParse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quantile level must lie in (0, 1], got {0}")]
    QuantileOutOfRange(f64),

    #[error("upper quantile is not finite at p = {0}")]
    QuantileUndefined(f64),

    #[error("tail probability is zero at t = {0}; mean residual undefined")]
    ZeroTail(f64),

    #[error("divergent tail integral: {0}")]
    DivergentIntegral(String),

    #[error("{0} does not satisfy the required max-domain condition")]
    HypothesisNotSatisfied(String),

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("could not bracket the rate equation for r = {0}")]
    Unbracketable(f64),

    #[error("moment order k = {k} must lie in (0, {alpha})")]
    MomentOutOfRange { k: f64, alpha: f64 },

    #[error("tilt parameter t* = {0} >= 1; tilted sampling infeasible")]
    TiltInfeasible(f64),

    #[error("instance {n}x{m} too large: {limit}")]
    InstanceTooLarge { n: usize, m: usize, limit: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
