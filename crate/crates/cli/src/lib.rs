//! Library side of `gate-tool`: input parsing, reports and sweeps.

pub mod commands;
pub mod input;
pub mod report;
pub mod sweep;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NOT_UNITARY: i32 = 3;
    pub const SYNTHESIS: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("input matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("synthesis residual {0:.3e} exceeds tolerance")]
    Synthesis(f64),
    #[error(transparent)]
    Core(ybgate::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<ybgate::Error> for CliError {
    fn from(e: ybgate::Error) -> Self {
        match e {
            ybgate::Error::NotUnitary { residual } => CliError::NotUnitary(residual),
            ybgate::Error::SynthesisResidual { residual } => CliError::Synthesis(residual),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotUnitary(_) => exit::NOT_UNITARY,
            CliError::Synthesis(_) => exit::SYNTHESIS,
            CliError::Input(_) | CliError::Core(_) | CliError::Io(_) => exit::INPUT,
        }
    }
}
