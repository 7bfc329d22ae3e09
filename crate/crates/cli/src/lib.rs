//! Library side of the `bellspace` command-line tool: scenario files,
//! JSON reports, CSV scans and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario_file;

pub use error::CliError;
