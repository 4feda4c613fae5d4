use std::path::PathBuf;

/// Exit codes of the `jacobi` binary.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const CHARACTERIZATION: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid input: {0}")]
    Input(jacobi_inverse::Error),
    #[error("numerical failure: {0}")]
    Numerical(jacobi_inverse::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => exit::NUMERICAL,
            _ => exit::USAGE,
        }
    }

    /// Classifies an error raised while computing (inputs already validated).
    pub fn computing(e: jacobi_inverse::Error) -> Self {
        use jacobi_inverse::Error::*;
        match e {
            SingularConnecting(_) | SingularMinor(_) | DegenerateTrajectory(_) | ZeroLeadingEntry
            | ZeroCoupling(_) | NonFinite(_) => CliError::Numerical(e),
            _ => CliError::Input(e),
        }
    }
}
