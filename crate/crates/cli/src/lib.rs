//! Library side of the command-line front end: job parsing, subcommand
//! implementations, and the verification suite.

pub mod commands;
pub mod job;
pub mod verify;
