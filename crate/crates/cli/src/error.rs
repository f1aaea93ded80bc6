use cardinal_core::Error as CoreError;
use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Invalid flags, configuration file or output path.
pub const EXIT_CONFIG: i32 = 2;
/// A value could not be certified or a cross-check failed.
pub const EXIT_CERTIFICATION: i32 = 3;
/// The conjecture scan found a counterexample.
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_)
            | CoreError::DegreeTooLarge { .. }
            | CoreError::OrderTooSmall { .. }
            | CoreError::BandwidthMismatch { .. } => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_CERTIFICATION,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
