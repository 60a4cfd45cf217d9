use reinhardt_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },
}

impl CliError {
    pub fn input(msg: String) -> Self {
        Self::Input(msg)
    }

    pub fn io(msg: String) -> Self {
        Self::Io(msg)
    }

    pub fn core(context: String, source: CoreError) -> Self {
        Self::Core { context, source }
    }

    /// 2 for bad input, 3 when the geometry itself is infeasible or empty.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) | Self::Io(_) => 2,
            Self::Core { source, .. } => match source {
                CoreError::EmptyDomain
                | CoreError::EmptyWindow
                | CoreError::InfiniteSupport { .. } => 3,
                _ => 2,
            },
        }
    }
}

pub trait Context<T> {
    fn context(self, flag: &str) -> Result<T, CliError>;
}

impl<T> Context<T> for reinhardt_core::Result<T> {
    fn context(self, flag: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::core(flag.to_string(), e))
    }
}
