//! Parameter sweeps, CSV datasets and acceptance checks for substitute
//! counterdiabatic driving of a Landau-Zener sweep.
//!
//! - [`figures`]: figure identifiers, sweep axes and grids.
//! - [`sweep`]: per-figure drives and the parallel sweep runner.
//! - [`table`]: CSV tables.
//! - [`config`]: JSON configuration of single simulations.
//! - [`verify`]: the acceptance checks and their report.

pub mod config;
pub mod error;
pub mod figures;
pub mod sweep;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use figures::{Figure, Grid};
pub use sweep::{run_sweep, write_figure, SweepSpec};
