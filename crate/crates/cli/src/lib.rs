//! Spec files, analysis reports, corpus verification and the command
//! bodies of the `nijenhuis` binary.

pub mod analysis;
pub mod checks;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod report;
pub mod spec;

pub use error::{CliError, Exit};
