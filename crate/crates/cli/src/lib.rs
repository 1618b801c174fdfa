//! Instance files and subcommands for the `vanlat` binary.

pub mod commands;
pub mod format;
pub mod verify;

pub use commands::{Outcome, What, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
pub use format::{parse, serialize, InstanceFile, ParseError};
