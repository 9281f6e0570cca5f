use thiserror::Error;

/// Failure classes of the command line, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    /// The dataset could not be read or is inconsistent.
    #[error(transparent)]
    Data(tgq_core::Error),
    #[error(transparent)]
    Query(#[from] tgq_dsl::DslError),
    #[error("{failed} of {total} corpus queries failed")]
    Batch { failed: usize, total: usize },
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Data(_) => 2,
            CliError::Query(_) | CliError::Batch { .. } => 3,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Output(_) => "USAGE_ERROR",
            CliError::Config(_) => "CONFIG_ERROR",
            CliError::Data(e) => e.code(),
            CliError::Query(e) => e.code(),
            CliError::Batch { .. } => "QUERY_ERROR",
        }
    }

    /// The single-line form written to stderr.
    pub fn line(&self) -> String {
        let msg = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("TGQ-ERROR {} {msg}", self.code())
    }
}
