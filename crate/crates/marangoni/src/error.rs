//! Error taxonomy and process exit statuses.

use std::fmt;

/// Everything that can go wrong in a simulation run.
#[derive(Debug)]
pub enum SimError {
    /// Configuration file could not be parsed or failed validation.
    Config(String),
    /// An iterative solver exhausted its iteration budget.
    Solver(String),
    /// A discrete invariant (maximum principle) was violated beyond the
    /// abort threshold.
    Invariant(String),
    /// File system I/O failed.
    Io(String),
}

impl SimError {
    /// Process exit status associated with this error kind.
    /// Success is 0; the four failure kinds map to 1–4.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 1,
            SimError::Invariant(_) => 2,
            SimError::Solver(_) => 3,
            SimError::Io(_) => 4,
        }
    }

    /// Short machine-readable status keyword used in run summaries.
    pub fn status_keyword(&self) -> &'static str {
        match self {
            SimError::Config(_) => "config-error",
            SimError::Invariant(_) => "invariant-abort",
            SimError::Solver(_) => "solver-failure",
            SimError::Io(_) => "io-failure",
        }
    }
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Config(msg) => write!(f, "config error: {msg}"),
            SimError::Solver(msg) => write!(f, "solver failure: {msg}"),
            SimError::Invariant(msg) => write!(f, "invariant violated: {msg}"),
            SimError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for SimError {}

impl From<std::io::Error> for SimError {
    fn from(e: std::io::Error) -> Self {
        SimError::Io(e.to_string())
    }
}
