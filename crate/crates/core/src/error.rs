use serde::Serialize;
use thiserror::Error;

/// Errors raised by the solvers, the tracking engine and the configuration layer.
#[derive(Debug, Clone, Error, PartialEq, Serialize)]
pub enum Error {
    /// A state left the regime where the steady system is hyperbolic with `u > c`.
    #[error("regime error: {0}")]
    Regime(String),

    /// An iterative solve did not reach its tolerance.
    #[error("newton failure in {context}: residual {residual:e} after {iterations} iterations")]
    Newton {
        context: String,
        residual: f64,
        iterations: usize,
    },

    /// The flow left the perturbative regime (detachment, no admissible strong shock, ...).
    #[error("structural failure: {0}")]
    Structural(String),

    /// Invalid input to an operation (wrong wave kind, out-of-range parameter).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A configuration violates one of the admissibility conditions.
    #[error("config error [{condition}]: {message}")]
    Config { condition: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(condition: &str, message: impl Into<String>) -> Self {
        Error::Config {
            condition: condition.to_string(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
