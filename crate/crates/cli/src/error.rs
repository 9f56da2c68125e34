use resotunnel::TunnelError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(TunnelError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("oracle check failed")]
    OracleFailed,
}

impl From<TunnelError> for CliError {
    fn from(e: TunnelError) -> Self {
        match e {
            TunnelError::Domain(msg) => CliError::Usage(msg),
            other => CliError::Solver(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Solver(_) | CliError::Io(_) => 2,
            CliError::OracleFailed => 3,
        }
    }

    /// Short machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Solver(TunnelError::NotFound(_)) => "not_found",
            CliError::Solver(TunnelError::Divergent { .. }) => "divergent",
            CliError::Solver(TunnelError::SolverFailure { .. }) => "solver_failure",
            CliError::Solver(TunnelError::Overflow(_)) => "overflow",
            CliError::Solver(_) => "solver",
            CliError::Io(_) => "io",
            CliError::OracleFailed => "oracle_failed",
        }
    }
}
