use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("at sweep index {index}: {source}")]
    Model {
        index: usize,
        source: tropo_core::Error,
    },
    #[error("{failed} of {total} criteria failed")]
    SelfTest { failed: usize, total: usize },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Io { .. } | CliError::Csv { .. } => "IoError",
            CliError::Model { source, .. } => source.kind(),
            CliError::SelfTest { .. } => "SelfTestFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Model { source, .. } if source.is_invalid_input() => 1,
            CliError::Io { .. } | CliError::Csv { .. } => 2,
            CliError::Model { .. } | CliError::SelfTest { .. } => 3,
        }
    }

    /// `error kind=<Kind> message=<text>` on a single line.
    pub fn diagnostic(&self) -> String {
        let message = self.to_string().replace(['\n', '\r'], " ");
        format!("error kind={} message={message}", self.kind())
    }
}
