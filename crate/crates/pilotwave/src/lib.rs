//! File formats, reports and the command-line front end for
//! [`pilotwave_core`].

// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod error;
pub mod files;
pub mod output;
pub mod suite;

pub use error::{CliError, CliResult, Exit};
