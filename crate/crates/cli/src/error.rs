use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// An estimator could not produce a requested result.
pub const EXIT_ESTIMATOR: i32 = 1;
/// Bad arguments, unreadable input or an invalid config.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] tailindex::Error),

    #[error("{method}: {source}")]
    Estimator {
        method: String,
        #[source]
        source: tailindex::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use tailindex::Error as E;
        match self {
            CliError::Estimator { .. } => EXIT_ESTIMATOR,
            CliError::Core(e) => match e {
                E::InvalidSample(_) | E::InvalidK { .. } | E::ThresholdTie { .. } | E::InvalidArgument(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_ESTIMATOR,
            },
            _ => EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
