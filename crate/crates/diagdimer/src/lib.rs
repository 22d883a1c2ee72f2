//! File formats, SVG rendering and subcommand implementations for the
//! `diagdimer` binary.

pub mod commands;
pub mod error;
pub mod io;
pub mod render;

pub use error::CliError;
