use std::fmt;

use paraion_core::Error as CoreError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailed = 1,
    InputError = 2,
    NumericalError = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) | CliError::Field { .. } | CliError::Io { .. } => ExitCode::InputError,
            CliError::Verification(_) => ExitCode::VerificationFailed,
            CliError::Numerical(_) => ExitCode::NumericalError,
        }
    }

    pub fn field(path: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Field {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotHermitian { .. }
            | CoreError::StepFailure { .. }
            | CoreError::LeakageExceeded { .. }
            | CoreError::FitDidNotConverge { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
