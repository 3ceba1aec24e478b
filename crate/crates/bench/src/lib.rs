//! Benchmark harness for the wafer-stage controllers: TOML configuration,
//! batch runs over controllers × cases × seeds, trace CSVs, the RMS
//! summary table and grid tuning.

#![warn(missing_docs)]

pub mod config;
mod error;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod trace;

pub use config::{BenchSpec, CaseSpec, GridSpec};
pub use error::{BenchError, Result};
pub use report::{RunRecord, RunReport};
pub use runner::{run_bench, tune_grid, TuneResult};
