//! Errors of the command-line front end and their exit codes.

use thiserror::Error;

/// Exit code of a successful run.
pub const EXIT_OK: u8 = 0;
/// Exit code for I/O and schema failures.
pub const EXIT_INTERNAL: u8 = 1;
/// Exit code for invalid configurations.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for numerical budget failures.
pub const EXIT_BUDGET: u8 = 3;
/// Exit code for failed acceptance thresholds.
pub const EXIT_THRESHOLD: u8 = 4;

/// Failure of a subcommand.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or arguments.
    #[error("config error: {0}")]
    Config(String),
    /// Error raised by the library.
    #[error(transparent)]
    Core(#[from] halfpipe::Error),
    /// A computed quantity missed its threshold.
    #[error("threshold failure: {0}")]
    Threshold(String),
    /// An output did not match its schema.
    #[error("output {name} does not match its schema: {message}")]
    Schema {
        /// Name of the schema.
        name: String,
        /// Validation messages.
        message: String,
    },
    /// Reading or writing a file failed.
    #[error("cannot write {path}: {source}")]
    Io {
        /// Path of the file.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> u8 {
        use halfpipe::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(
                E::Config(_)
                | E::BadTraces(..)
                | E::BadGenerators(..)
                | E::BadWord(..)
                | E::BadMulticurve(..)
                | E::InsufficientGrid { .. },
            ) => EXIT_CONFIG,
            CliError::Core(_) => EXIT_BUDGET,
            CliError::Threshold(_) => EXIT_THRESHOLD,
            CliError::Schema { .. } | CliError::Io { .. } => EXIT_INTERNAL,
        }
    }
}

/// Result of a subcommand.
pub type CliResult<T> = std::result::Result<T, CliError>;
