//! Library side of the `qcav` command: configuration, commands and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;

pub use commands::{run, Report};
pub use config::{Mode, RunConfig};
pub use error::CliError;
