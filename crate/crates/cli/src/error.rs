use thiserror::Error;

/// Exit status for a run whose checks failed.
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
/// Exit status for a scenario that could not be parsed, validated or written.
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error(transparent)]
    Core(#[from] pps_core::Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Input {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn scenario(msg: impl Into<String>) -> Self {
        CliError::Scenario(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        EXIT_INVALID
    }
}
