//! Library side of the `esdsim` binary: config parsing, CSV and SVG output,
//! and the subcommands.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;

pub use error::{CliError, Result};
