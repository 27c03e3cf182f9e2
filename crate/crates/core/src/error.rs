use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum ScmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("estimation failed in column {column}: {reason}")]
    EstimationFailure { column: usize, reason: String },
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ScmError>;

impl ScmError {
    /// Process exit code used by the `scm` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScmError::InvalidArgument(_)
            | ScmError::Domain(_)
            | ScmError::SingularParameter(_)
            | ScmError::DegenerateConfiguration(_)
            | ScmError::InconsistentInput(_) => 2,
            ScmError::NumericalFailure(_) | ScmError::EstimationFailure { .. } => 3,
            ScmError::Io(_) | ScmError::Csv(_) => 4,
            ScmError::Json(e) if e.is_io() => 4,
            ScmError::Json(_) => 2,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> ScmError {
    ScmError::InvalidArgument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> ScmError {
    ScmError::Domain(msg.into())
}

pub(crate) fn numerical(msg: impl Into<String>) -> ScmError {
    ScmError::NumericalFailure(msg.into())
}
