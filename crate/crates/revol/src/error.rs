//! Command errors and their exit codes.

use revol_core::{Error as CoreError, ErrorClass};
use thiserror::Error;

use crate::io::IoError;

/// Exit code for invalid configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for data errors.
pub const EXIT_DATA: u8 = 3;
/// Exit code for numerical failures.
pub const EXIT_NUMERICAL: u8 = 4;

/// Anything that can stop a command.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{context}: {source}")]
    Core { context: String, source: CoreError },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl CliError {
    /// Wrap a core error with a description of where it happened.
    pub fn core(context: impl Into<String>) -> impl FnOnce(CoreError) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) | CliError::Json { .. } => EXIT_DATA,
            CliError::Core { source, .. } => match source {
                CoreError::InvalidConfig(_) | CoreError::InvalidGrid => EXIT_CONFIG,
                e => match e.class() {
                    ErrorClass::Data => EXIT_DATA,
                    ErrorClass::Numerical => EXIT_NUMERICAL,
                },
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_error_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::core("c")(CoreError::InvalidGrid).exit_code(), 2);
        assert_eq!(CliError::core("c")(CoreError::EmptySeries).exit_code(), 3);
        assert_eq!(CliError::core("c")(CoreError::AllFitsFailed).exit_code(), 4);
        let io = IoError::Missing { path: "a".into() };
        assert_eq!(CliError::from(io).exit_code(), 3);
    }
}
