//! Run configuration, output writers and the run driver.

pub mod config;
pub mod run;
pub mod series;
pub mod vtk;

pub use config::{Config, ConfigError};
pub use run::{run, run_spec, RunOptions, RunOutcome, RunSummary, OUT_ROOT_ENV};
pub use series::{centerline, write_centerline, write_gauges, GaugeTraces};
pub use vtk::{vtk_string, write_vtk};
