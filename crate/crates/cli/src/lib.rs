//! Command-line driver for `projconst`: JSON space definitions in, JSON reports out.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{exit_code, run_suite, Command, Flags, Lemma};
pub use config::{parse_config, SpaceConfig};
pub use error::CliError;
pub use report::Report;
