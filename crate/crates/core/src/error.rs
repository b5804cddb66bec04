use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("invalid defining polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not integral with integer power-basis coordinates: {0}")]
    NotIntegral(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("2m = {two_m} does not divide q^2 = {q_squared}")]
    Divisibility { two_m: u64, q_squared: u64 },
    #[error("degree h = {0} is too small (need h >= 2)")]
    DegreeTooSmall(usize),
    #[error("parameter error: {0}")]
    ParamError(String),
    #[error("no nonvanishing order found below the cap {cap}")]
    OrderSearchExceeded { cap: usize },
    #[error("evaluation point is too close to the pole at {pole}")]
    PoleProximity { pole: i64 },
    #[error("target width not reached after {arcs} arcs (width {width:e})")]
    WidthNotReached { arcs: usize, width: f64 },
    #[error("no contradiction threshold: every r works")]
    NoThreshold,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
