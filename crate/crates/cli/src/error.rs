use std::fmt;

/// Failure of a CLI run, carrying its exit-code class.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid configuration, or an unwritable output path. Exit code 2.
    Config(String),
    /// A numerical routine failed. Exit code 1.
    Numeric(stochastic_relaxation::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric(_) => 1,
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        Self::Config(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Numeric(e) => write!(f, "numeric failure: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stochastic_relaxation::Error> for CliError {
    fn from(e: stochastic_relaxation::Error) -> Self {
        Self::Numeric(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Maps a library error raised while validating config values to a config error.
pub(crate) trait ConfigContext<T> {
    fn config_err(self, what: &str) -> CliResult<T>;
}

impl<T> ConfigContext<T> for Result<T, stochastic_relaxation::Error> {
    fn config_err(self, what: &str) -> CliResult<T> {
        self.map_err(|e| CliError::Config(format!("{what}: {e}")))
    }
}
