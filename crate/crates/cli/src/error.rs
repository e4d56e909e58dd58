use std::path::PathBuf;

use thiserror::Error;

/// Everything the driver can fail with. Each variant maps to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(anisoreg_core::Error),
    #[error("blow-up at step {step} (t = {t})")]
    BlowUp { step: u64, t: f64 },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for a run that blew up, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) => 1,
            CliError::BlowUp { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<anisoreg_core::Error> for CliError {
    fn from(e: anisoreg_core::Error) -> Self {
        match e {
            anisoreg_core::Error::BlowUp { step, t } => CliError::BlowUp { step, t },
            other => CliError::Core(other),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
