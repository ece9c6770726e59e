use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("external curve: {0}")]
    External(String),

    #[error("regime check failed: {0}")]
    Regime(String),

    #[error(transparent)]
    Core(#[from] magnus_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// 2 for bad input, 3 for a strict regime failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::External(_) => 2,
            CliError::Regime(_) => 3,
            _ => 1,
        }
    }
}
