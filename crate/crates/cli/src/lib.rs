//! Command-line front end for `wstate-core`: configuration, CSV output and
//! the self-check harness behind `wstate verify`.

pub mod commands;
pub mod config;
pub mod csvfmt;
mod error;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
