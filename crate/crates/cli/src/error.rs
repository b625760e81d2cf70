use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Degenerate = 2,
    NonHomogeneous = 3,
    CorpusFailure = 4,
    Internal = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Core(#[from] nijenhuis_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        use nijenhuis_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => Exit::Usage,
            CliError::Core(E::Degenerate | E::TorsionDimension(_)) => Exit::Degenerate,
            CliError::Core(E::NotLocallyHomogeneous { .. }) => Exit::NonHomogeneous,
            CliError::Core(E::Expr(_) | E::ConstraintViolated(_)) => Exit::Usage,
            CliError::Core(_) => Exit::Internal,
        }
    }
}
