//! File formats and command-line front end for `revol-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use commands::run;
pub use config::Cli;
pub use error::CliError;
