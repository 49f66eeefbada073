//! Library side of the `lrt` command: argument definitions, run
//! configuration, command implementations and CSV reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

pub use args::Cli;
pub use commands::{exit_code, run};
pub use config::RunConfig;
