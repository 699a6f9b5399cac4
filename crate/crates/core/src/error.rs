use thiserror::Error;

/// Errors raised by model construction, simulation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    ShapeMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("junction {index} is biased below its critical current (alpha = {alpha})")]
    BelowCriticalBias { index: usize, alpha: f64 },

    #[error("singular linear response at harmonic {harmonic}")]
    SingularResponse { harmonic: usize },

    #[error("integration diverged after t = {last_good_time}")]
    Divergence { last_good_time: f64 },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
