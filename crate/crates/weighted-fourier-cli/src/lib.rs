//! `wfi`: command-line front end for the weighted-fourier library.

pub mod app;
pub mod plot;
pub mod suites;

pub use app::{run, Cli, CliError};
