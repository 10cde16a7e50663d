use thiserror::Error;

/// Failures surfaced to the command line, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("obstruction: {0}")]
    Obstruction(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Obstruction(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Config(_) | CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<cocycle_core::Error> for CliError {
    fn from(e: cocycle_core::Error) -> Self {
        use cocycle_core::Error as E;
        match e {
            E::NotNullhomotopic(_) => CliError::Obstruction(e.to_string()),
            E::InvalidParameter(_)
            | E::InvalidGenerator(_)
            | E::UnsupportedDimension(_)
            | E::DimensionMismatch { .. }
            | E::StepNotDividing { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
