use thiserror::Error;

/// Failure classes of a command, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<chaoskit::Error> for CliError {
    fn from(e: chaoskit::Error) -> Self {
        match e {
            chaoskit::Error::InvalidArgument(m) | chaoskit::Error::NotFound(m) => CliError::Config(m),
            chaoskit::Error::InsufficientData(m) => CliError::Data(m),
            chaoskit::Error::Numerical(m) => CliError::Numerical(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reclassifies a library error raised while validating input data.
pub fn as_data(e: chaoskit::Error) -> CliError {
    match e {
        chaoskit::Error::Numerical(m) => CliError::Numerical(m),
        other => CliError::Data(other.to_string()),
    }
}
