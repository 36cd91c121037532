//! Sweep driver behind the `verify` binary: configuration, job planning,
//! parallel execution and report rendering.

pub mod config;
pub mod plan;
pub mod report;

pub use config::{BSpec, Cli, ConfigError, Format, GranvilleConfig, SweepConfig, Target};
pub use plan::{execute, granville_samples, plan, run, Job};
pub use report::{render, strip_timings, CheckRecord, Report, TableRow, SCHEMA_VERSION};
