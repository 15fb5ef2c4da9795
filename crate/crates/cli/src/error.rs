use thiserror::Error;

/// CLI-level failures with their process exit codes: 2 for configuration
/// problems, 3 for numeric failures, 1 for everything else.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<onecorr_core::Error> for CliError {
    fn from(err: onecorr_core::Error) -> Self {
        match err {
            onecorr_core::Error::NonFinite { .. } => CliError::Numeric(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
