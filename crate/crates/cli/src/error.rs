use thiserror::Error;

/// CLI failures, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<ndspec::Error> for CliError {
    fn from(e: ndspec::Error) -> Self {
        match e {
            ndspec::Error::NotPositiveDefinite { .. } | ndspec::Error::CrossCheck(_) => CliError::Numerical(e.to_string()),
            ndspec::Error::Format { .. } | ndspec::Error::NotHermitian { .. } => CliError::Io(e.to_string()),
            ndspec::Error::InvalidComposition(_) | ndspec::Error::InvalidSpec(_) => CliError::Usage(e.to_string()),
            other => CliError::Io(other.to_string()),
        }
    }
}
