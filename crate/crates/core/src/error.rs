use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shift {0:?} is not a multiple of the grid spacing and interpolation is disabled")]
    OffGrid(Vec<f64>),

    #[error("spectrum extends to {extent} but the grid only represents frequencies below {nyquist}")]
    Aliasing { extent: f64, nyquist: f64 },

    #[error("sampling set is empty")]
    EmptySet,

    #[error("least-squares system is ill-conditioned (condition estimate {condition:e}); pass a positive regularization")]
    IllConditioned { condition: f64 },

    #[error("lower frame bound is zero at this discretization; the frame algorithm needs A > 0")]
    NotAFrame,

    #[error("sampling family is not ordered by inclusion: set {index} is not contained in set {next}", next = index + 1)]
    NotInclusionOrdered { index: usize },

    #[error("signal is not concentrated inside the grid: {0}")]
    Truncation(String),

    /// `line` is 1-based; 0 when the problem is not tied to one line.
    #[error("{}", config_message(*line, message))]
    Config { line: usize, message: String },

    #[error("malformed container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn config_message(line: usize, message: &str) -> String {
    if line == 0 {
        message.to_string()
    } else {
        format!("line {line}: {message}")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
