use std::path::Path;

use thiserror::Error;

use crate::error::Error;

/// Failures of a CLI invocation, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid input: {0}")]
    Data(Error),

    #[error("numerical failure: {0}")]
    Numerical(Error),
}

impl CliError {
    pub fn io(path: &Path, err: &std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub(crate) fn with_path(self, p: &Path) -> Self {
        match self {
            CliError::Parse {
                line, column, message, ..
            } => CliError::Parse {
                path: p.display().to_string(),
                line,
                column,
                message,
            },
            other => other,
        }
    }

    /// 1 usage, 2 data or I/O, 3 numerical failure. Invariant violations
    /// (4) are not errors: the run completes and reports them.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Data(e)
        }
    }
}
