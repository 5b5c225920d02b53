//! CLI error channel mapped onto process exit codes.
//!
//! Exit codes: 0 ok / claim-consistent, 1 invariant violated, 2 config error,
//! 3 runtime domain error, 4 degenerate-but-valid probe.

use std::fmt;

use beamsim::{FieldError, MetricsError, ValidationError};

#[derive(Debug)]
pub enum CliError {
    /// Parse or validation failure in the scenario config (exit 2).
    Config(String),
    /// Domain or I/O failure while running a valid config (exit 3).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Invalid(v) => CliError::Config(v.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Invalid(v) => CliError::Config(v.to_string()),
            MetricsError::Field(f) => CliError::from(f),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o failure: {e}"))
    }
}
