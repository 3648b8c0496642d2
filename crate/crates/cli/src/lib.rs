//! Command-line front end for `cyclic-lattice`: report emission and the
//! exhaustive sweep harness.

pub mod app;
pub mod output;
pub mod sweep;

pub use app::{run, Cli, CliError};
pub use output::{strip_timing, Format, SCHEMA};
pub use sweep::{run_sweep, CheckKind, SweepReport, SweepSpec};
