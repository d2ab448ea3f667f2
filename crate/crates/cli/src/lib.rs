//! Scenario-driven front end for `dqw-core`: loads scenario files, runs the
//! validate, build-tau, deform and check-pos stages and emits deterministic
//! reports.

pub mod report;
pub mod runner;
pub mod scenario;

use thiserror::Error;

pub use report::{CommandReport, Format, RunReport, Status};
pub use runner::run_scenario;
pub use scenario::{Command, Overrides, Scenario};

/// Exit code for configuration and parse errors.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{source_name}: {message}")]
    Parse { source_name: String, message: String },
    #[error("invalid scenario: {0}")]
    Config(String),
}
