//! Command-line driver for point counts, congruence reports, zeta recovery
//! and slope analysis of the Dwork pencil and its mirror.

pub mod commands;
pub mod error;
pub mod lambda;
pub mod output;
pub mod sweep;

pub use commands::{run, Cli};
pub use error::CliError;
