//! Command-line driver: subcommands over `maass-core` and the acceptance suite.

pub mod acceptance;
pub mod commands;

pub use acceptance::{acceptance_suite, Profile, SuiteReport};
pub use commands::{dispatch, Cli};
