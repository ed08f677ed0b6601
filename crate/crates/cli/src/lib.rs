//! Scenario-driven front end for `cc-sched`.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod wire;

pub use commands::{run, Cli, CliError};
