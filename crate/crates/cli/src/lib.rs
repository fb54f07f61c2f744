//! Configuration, experiment orchestration, export and invariant suites for
//! the `nagumo` command-line tool.

pub mod config;
pub mod error;
pub mod experiments;
pub mod export;
pub mod invariants;

pub use error::{CliError, ConfigError, Result};
