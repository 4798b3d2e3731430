use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or schema-invalid input.
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Model(#[from] vr3c::Error),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 0 ok, 1 unexpected, 2 bad input, 3 infeasible model, 4 size cap.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Read { .. } => 2,
            CliError::Write { .. } => 1,
            CliError::Model(e) => match e {
                vr3c::Error::TooLarge { .. } => 4,
                vr3c::Error::Internal(_) => 1,
                e if e.is_infeasibility() => 3,
                _ => 2,
            },
        }
    }
}
