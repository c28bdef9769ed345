//! CLI error channel with the exit-code contract:
//! 1 usage/config, 2 input data, 3 infeasible model.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, bad parameter values. Exit 1.
    Usage(String),
    /// Unreadable or malformed input data. Exit 2.
    Input(String),
    /// Parameters in range but the model they describe cannot exist. Exit 3.
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Messages arrive with their own context (core errors carry an
        // "infeasible model:"/"domain error:" prefix already).
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Infeasible(m) => {
                write!(f, "{m}")
            }
        }
    }
}

impl std::error::Error for CliError {}

/// Wrap an error as a usage problem (exit 1).
pub fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Wrap an error as an input-data problem (exit 2).
pub fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Map a core-library error from *configuration* of a run: infeasibility
/// keeps its channel (exit 3), anything else was a bad parameter (exit 1).
pub fn from_core(e: allelic::Error) -> CliError {
    match e {
        allelic::Error::Infeasible(_) | allelic::Error::DegenerateModel(_) => {
            CliError::Infeasible(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
