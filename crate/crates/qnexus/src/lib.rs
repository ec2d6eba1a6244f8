//! Command-line front end for `qnexus-core`: architecture files with
//! overrides, workload strings, run and sweep orchestration, and report
//! writers for JSON, CSV and plain text.

pub mod config;
pub mod report;
pub mod run;
pub mod workload;

pub use config::{apply_overrides, load_arch, resolve_arch, ConfigError};
pub use run::{render_run, run, sweep, Format, RunConfig, RunError, SweepConfig};
pub use workload::Workload;
