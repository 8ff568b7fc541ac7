use std::path::PathBuf;

use effcomm::simloop::SimError;
use effcomm::TraceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Trace {
        path: PathBuf,
        #[source]
        source: TraceError,
    },
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage or configuration problems, 2 for bad input data or I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::InvalidConfig(_) => 1,
            CliError::Trace { .. } | CliError::Data(_) | CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Trace(TraceError::Mobility(m)) => CliError::InvalidConfig(m),
            SimError::Trace(t) => CliError::Data(t.to_string()),
            other => CliError::InvalidConfig(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
