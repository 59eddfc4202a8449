use stepscatter_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(CoreError),

    #[error("spectral guard: {0}")]
    SpectralGuard(CoreError),

    #[error("{failed} of {total} validation checks failed")]
    ValidationFailed { failed: usize, total: usize },

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed { .. } => 1,
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::SpectralGuard(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SpectralGuardViolated { .. } => CliError::SpectralGuard(e),
            other => CliError::Numerical(other),
        }
    }
}
