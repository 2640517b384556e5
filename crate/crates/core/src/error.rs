use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular Euler factor at p = {p}")]
    SingularFactor { p: u64 },

    #[error("empty family: {0}")]
    EmptyFamily(String),

    #[error("wrong operator: {0}")]
    WrongOperator(String),

    #[error("degenerate eigenspace: {0}")]
    DegenerateEigenspace(String),

    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("weight failure: {0}")]
    WeightFailure(String),

    #[error("log branch failure: {0}")]
    Branch(String),

    #[error("inadmissible target: {0}")]
    InadmissibleTarget(String),

    #[error("validation failed at {location}: {message}")]
    Validation { location: String, message: String },

    #[error("arithmetic overflow in exact linear algebra")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Whether the error stems from bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::EmptyFamily(_)
                | Error::InadmissibleTarget(_)
                | Error::Validation { .. }
                | Error::Json(_)
                | Error::WrongOperator(_)
        )
    }

    /// Short machine-parsable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::SingularFactor { .. } => "singular-factor",
            Error::EmptyFamily(_) => "empty-family",
            Error::WrongOperator(_) => "wrong-operator",
            Error::DegenerateEigenspace(_) => "degenerate-eigenspace",
            Error::IncompleteData(_) => "incomplete-data",
            Error::Inconsistency(_) => "inconsistency",
            Error::WeightFailure(_) => "weight-failure",
            Error::Branch(_) => "branch",
            Error::InadmissibleTarget(_) => "inadmissible-target",
            Error::Validation { .. } => "validation",
            Error::Overflow => "overflow",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
