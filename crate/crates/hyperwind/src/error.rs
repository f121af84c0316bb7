use std::path::PathBuf;

use hyperwind_core::Error as CoreError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Io = 1,
    Usage = 2,
    PhysicalAbort = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A configuration field failed validation; `pointer` is a JSON pointer.
    #[error("{pointer}: {message}")]
    Invalid { pointer: String, message: String },
    #[error("{0}")]
    Domain(String),
    #[error("physical abort: {0}")]
    Abort(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Invalid { pointer: pointer.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Invalid { .. } | CliError::Domain(_) => ExitCode::Usage,
            CliError::Abort(_) => ExitCode::PhysicalAbort,
            CliError::Io { .. } => ExitCode::Io,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BlowUp { .. } => CliError::Abort(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}
