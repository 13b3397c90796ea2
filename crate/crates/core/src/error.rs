use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Photon energy does not reach the continuum: omega + e0 <= 0.
    #[error("below breakup threshold: omega + e0 = {excess} (must be > 0)")]
    BelowThreshold { excess: f64 },

    /// Argument lies outside the region where a kernel meets its accuracy target.
    #[error("argument out of range for {what}: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: estimated error {estimate:e} exceeds {tolerance:e}")]
    NoConvergence { estimate: f64, tolerance: f64 },

    #[error("grid too coarse: {points} points per dimension, need at least {minimum}")]
    GridTooCoarse { points: usize, minimum: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
