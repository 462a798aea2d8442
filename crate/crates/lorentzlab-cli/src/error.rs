use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {msg}")]
    Config { path: PathBuf, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Lib { context: String, source: lorentzlab::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for unreadable or malformed input, 3 for violated preconditions,
    /// 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        use lorentzlab::Error as E;
        match self {
            CliError::Io { .. } | CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Lib { source, .. } => match source {
                E::Parse { .. } | E::Parameter(_) => 2,
                E::Numerical(_) => 4,
                E::Precondition(_) | E::Domain(_) | E::Dimension(_) | E::Unsupported(_) | E::Index { .. } => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn ctx(self, context: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for lorentzlab::Result<T> {
    fn ctx(self, context: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Lib { context: context.into(), source })
    }
}
