use std::path::{Path, PathBuf};

use sentimin::corpus::CorpusError;
use sentimin::evaluate::EvalError;
use sentimin::nbayes::NbError;
use thiserror::Error;

/// Exit codes: 2 I/O, 3 configuration, 4 data shape.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Config(_) => 3,
            CliError::Data(_) => 4,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::FileNotFound(path) => CliError::Io {
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                path,
            },
            CorpusError::Io { path, source } => CliError::Io { path, source },
            CorpusError::EmptyKeywordList => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<NbError> for CliError {
    fn from(e: NbError) -> Self {
        match e {
            NbError::InvalidAlpha(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::InvalidK(_) | EvalError::Feature(_) => CliError::Config(e.to_string()),
            EvalError::Fold {
                source: NbError::InvalidAlpha(_),
                ..
            } => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}
