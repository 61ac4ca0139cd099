use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid exponent p = {0}: need 1 < p < infinity")]
    InvalidExponent(f64),

    #[error("argument {arg} outside [{lo}, {hi}]")]
    OutOfRange { arg: f64, lo: f64, hi: f64 },

    #[error("function is not increasing on the bracketing grid near t = {0}")]
    NotMonotone(f64),

    #[error("figiel check needs 0 < eps <= eta <= 2, got eps = {eps}, eta = {eta}")]
    BadFigielArgs { eps: f64, eta: f64 },

    #[error("invalid Figiel constant L = {0}: need 1 < L <= 3.18")]
    BadFigielConstant(f64),

    #[error("zero direction passed to linear minimization oracle")]
    ZeroDirection,

    #[error("invalid set descriptor: {0}")]
    InvalidSet(String),

    #[error("point is not in the set (distance {0})")]
    NotInSet(f64),

    #[error("projection did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("dimension {0} too large for exhaustive search")]
    DimensionTooLarge(usize),

    #[error("samples must be positive")]
    NoSamples,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("set file parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
