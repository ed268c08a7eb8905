//! IO, configuration, parallel drivers, and the command implementations
//! behind the `ghl` binary. The exact mathematics lives in `ghl-core`; this
//! crate only adds file formats, reports, and deterministic parallelism.

pub mod chain_file;
pub mod commands;
pub mod config;
pub mod gamma_file;
pub mod parallel;
pub mod report;

use std::path::PathBuf;

/// Errors at the CLI boundary, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] ghl_core::Error),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    BadInput(String),
    #[error("verification failed: {0}")]
    MathFailure(String),
    #[error("memory cap of {cap_mb} MiB exceeded ({used_mb} MiB in use)")]
    ResourceCap { cap_mb: usize, used_mb: usize },
}

impl CliError {
    /// 0 success, 1 mathematical failure, 2 input error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MathFailure(_) => 1,
            CliError::ResourceCap { .. } => 3,
            CliError::Core(_) | CliError::Parse { .. } | CliError::Io { .. }
            | CliError::BadInput(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
