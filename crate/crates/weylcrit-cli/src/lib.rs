//! Command-line front end: state files on disk, human-readable reports,
//! CSV reproduction bundles.

pub mod commands;
pub mod statefile;

pub use commands::{run, Cli, CmdError};
pub use statefile::StateFile;
