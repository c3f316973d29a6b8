use thiserror::Error;

use crate::numerics::OptimizerReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    /// A decoding metric must be strictly positive to have a finite log.
    #[error("metric entry ({x}, {y}) = {value} is not strictly positive")]
    NonPositiveMetric { x: usize, y: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),

    /// Carries the best iterate reached so callers can still inspect it.
    #[error("optimizer did not converge after {} iterations (best value {})", .0.iterations, .0.value)]
    OptimizerDidNotConverge(Box<OptimizerReport>),

    #[error("quadrature tolerance not reached: estimate {estimate}, error {error}")]
    ToleranceNotReached { estimate: f64, error: f64 },

    #[error("radius {r} is not below the feasibility radius {radius}")]
    InfeasibleRadius { r: f64, radius: f64 },

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("outside validity region: {0}")]
    OutsideValidity(String),

    #[error("no admissible broken extremal: {0}")]
    NoBrokenExtremal(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
