use std::path::PathBuf;
use thiserror::Error;

/// Failures of configuration, experiments and artifact I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spectra_core::Error),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("suite {suite} exceeded the wall-clock cap of {cap_seconds} s")]
    Timeout { suite: String, cap_seconds: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: malformed artifact: {reason}")]
    Malformed { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
