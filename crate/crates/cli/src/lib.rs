//! Command-line front end: configuration, report tables and the
//! `times`, `figure`, `evolve` and `validate` commands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;

pub use cli::{Cli, Command, Figure};
pub use config::RunConfig;
pub use error::CliError;
pub use output::{Cell, Column, Format, Table, Unit};
