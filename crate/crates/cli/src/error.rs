use thiserror::Error;

/// Failures that end the process, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments, gate specs or gate files.
    #[error("{0}")]
    Parse(String),

    /// Well-formed input that violates a precondition, or a numerical failure.
    #[error("{0}")]
    Invariant(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Invariant(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<deloc::Error> for CliError {
    fn from(e: deloc::Error) -> Self {
        use deloc::Error as E;
        match e {
            E::UnknownGate(_) | E::InvalidParameter(_) | E::DimensionMismatch(_) => CliError::Parse(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}
