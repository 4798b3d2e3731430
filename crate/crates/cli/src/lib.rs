//! Command-line front end for the `vr3c` solvers: scenario files, solver
//! dispatch, sweeps and CSV output.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod grid;
pub mod output;
pub mod scenario_file;

pub use args::{Cli, Command};
pub use commands::run;
pub use error::{CliError, Result};
