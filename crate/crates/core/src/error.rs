use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants are grouped by the exit code the command line maps them to:
/// input and validation problems exit with 2, hypothesis failures with 1.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy error: {message} (estimate {magnitude:e})")]
    Accuracy { message: String, magnitude: f64 },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("type error in `{node}`: {message}")]
    Type { node: String, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("dimension mismatch: expected {expected}, got {actual} ({what})")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("no contraction: update grew for {steps} consecutive steps (last change {last_change:e}); use smaller data")]
    NoContraction { steps: usize, last_change: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("degenerate disc: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn accuracy(message: impl Into<String>, magnitude: f64) -> Self {
        Error::Accuracy {
            message: message.into(),
            magnitude,
        }
    }

    /// True for errors caused by malformed or inconsistent input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Config(_)
                | Error::Syntax { .. }
                | Error::Type { .. }
                | Error::UnknownIdentifier(_)
                | Error::DimensionMismatch { .. }
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("scenario json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
