//! Library half of the `qmagic` command-line tool: state-spec parsing, the
//! sweep engine, verification suites, and dataset rendering. The binary owns
//! flag parsing and the execution policy (thread pool, exit codes).

use std::fmt;

pub mod output;
pub mod statespec;
pub mod sweep;
pub mod verify;

/// Errors mapped onto the exit-code contract: parse failures exit 2, I/O
/// failures 3, non-monotonic phase-shift input 4, everything else 1.
#[derive(Debug, Clone)]
pub enum CliError {
    Parse(String),
    Io(String),
    NonMonotonic(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Io(_) => 3,
            CliError::NonMonotonic(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Io(m)
            | CliError::NonMonotonic(m)
            | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qmagic_core::nn::PhaseShiftError> for CliError {
    fn from(e: qmagic_core::nn::PhaseShiftError) -> Self {
        use qmagic_core::nn::PhaseShiftError::*;
        match &e {
            Io(_) => CliError::Io(e.to_string()),
            NonMonotonic { .. } => CliError::NonMonotonic(e.to_string()),
            Parse { .. } | Unit { .. } => CliError::Parse(e.to_string()),
        }
    }
}
