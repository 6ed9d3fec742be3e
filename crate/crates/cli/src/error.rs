use loglie_core::Error as CoreError;
use thiserror::Error;

/// Failures that abort a command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, or an invalid flag combination.
    #[error("{0}")]
    Parse(String),
    /// A matrix is not on the manifold the command expects.
    #[error("{0}")]
    Membership(String),
    /// An iterative solver or linear system failed.
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Membership(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::NotPositiveDefinite { .. }
            | CoreError::NotMember(_)
            | CoreError::Overflow { .. } => CliError::Membership(msg),
            CoreError::NoConvergence { .. }
            | CoreError::SingularH0 { .. }
            | CoreError::SingularSystem
            | CoreError::SingularDiag { .. } => CliError::Solver(msg),
            _ => CliError::Parse(msg),
        }
    }
}
