//! Command-line companion to `anisoreg-core`: field files, `key=value`
//! configuration, CSV/JSON output and the `anisoreg` driver.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod fieldio;

pub use error::{CliError, Result};
