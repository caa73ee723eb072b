//! Command-line front end: state files, detection reports, parameter sweeps
//! and the claim ledger.

pub mod error;
pub mod mapspec;
pub mod report;
pub mod statefile;
pub mod verify;

pub use error::{exit, CliError, CliResult};
