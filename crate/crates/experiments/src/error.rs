use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ExperimentError>;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config error in `{key}`: {message}")]
    Parameter { key: String, message: String },
    #[error("unknown scenario `{0}` (see `homogen list-scenarios`)")]
    UnknownScenario(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("numerical validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] homogen_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl ExperimentError {
    pub fn parameter(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parameter {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 config, 3 resource guard, 4 validation, 1 other.
    pub fn exit_code(&self) -> i32 {
        use homogen_core::Error as CoreError;
        match self {
            Self::Config(_) | Self::Parameter { .. } | Self::UnknownScenario(_) => 2,
            Self::ResourceGuard(_) | Self::Core(CoreError::ResourceGuard { .. }) => 3,
            Self::Validation(_) | Self::Core(CoreError::Nonphysical { .. }) => 4,
            Self::Core(CoreError::InvalidParameter(_) | CoreError::TooManyCoefficients { .. }) => 2,
            _ => 1,
        }
    }
}
