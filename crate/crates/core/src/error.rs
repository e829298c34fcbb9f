use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the forecasting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Input object or model argument does not satisfy a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Forest or pairs document could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// All leaf labels are equal, so the normalized target is undefined.
    #[error("degenerate label range: y_min = y_max = {0}")]
    DegenerateRange(f64),

    /// A ratio-type metric hit a zero denominator.
    #[error("{metric} is undefined: {reason}")]
    DivisionDegenerate { metric: &'static str, reason: String },

    /// A gate references qubits that do not exist or overlap.
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),

    /// Compilation could not proceed (missing table entry, unsupported shape).
    #[error("compile error: {0}")]
    Compile(String),

    /// The requested simulation exceeds the simulator's capacity.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
