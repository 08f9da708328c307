//! Simulation core for a Cooper-pair box coupled to a single cavity mode.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod evolution;
pub mod fockspace;
pub mod gaussian;
pub mod hamiltonians;
pub mod oracle;
pub mod physical;
pub mod protocol;

pub use error::{Error, Result};
