use thiserror::Error;

/// Everything that can stop a run, with its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] pinlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                pinlab::Error::InvalidLaw(_) | pinlab::Error::InvalidArgument(_) => 2,
                _ => 3,
            },
        }
    }

    /// Name printed on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
