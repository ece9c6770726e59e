//! Scenario runner: config handling, the subcommands and their output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{Model, ScenarioConfig};
pub use error::CliError;
