//! Command-line front end: configuration, orchestration and file export.

pub mod commands;
pub mod config;
pub mod output;
pub mod units;

pub use commands::{run, Cli, Command, RunSummary};
pub use config::{ConfigError, RunConfig};
