use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key `{key}` (first set on line {first})")]
    Duplicate {
        line: usize,
        key: String,
        first: usize,
    },

    #[error("missing required key `{0}`")]
    Missing(String),

    #[error("line {line}: invalid value for `{key}`: {message}")]
    Invalid {
        line: usize,
        key: String,
        message: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Export { path: PathBuf, message: String },

    #[error(transparent)]
    Model(#[from] padic_nagumo::Error),

    #[error("{0} invariant check(s) failed")]
    Violations(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for invariant violations, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violations(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
