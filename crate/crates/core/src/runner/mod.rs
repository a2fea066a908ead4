//! Orchestration behind the `mqnmr` binary: simulations over time grids,
//! parameter sweeps, oracle comparisons, and their file output.

mod commands;
mod config;
mod output;

pub use commands::*;
pub use config::{ConfigOverrides, RunConfig, Temperature, OUT_DIR_ENV};
pub use output::{fmt_f64, populated_orders, simulation_csv, sweep_csv, RunMetadata, COLUMN_THRESHOLD};

use crate::error::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const CONSISTENCY: i32 = 2;
    pub const IO: i32 = 3;
}

/// Maps an error to the exit code the binary reports.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Json(_) => exit::IO,
        Error::SumRule { .. } | Error::Consistency(_) => exit::CONSISTENCY,
        _ => exit::USAGE,
    }
}
