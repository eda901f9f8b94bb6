//! Verification harness for the rough-kernel construction: configuration,
//! full verification runs, sweeps and report emission behind the `roughk`
//! binary.

pub mod config;
pub mod emit;
pub mod report;
pub mod run;
mod svg;

pub use config::{ConfigError, Format, Mode, PhiSpec, RunConfig, Settings};
pub use report::{CheckRecord, VerificationReport};
pub use run::{margins_non_increasing, run_sweep, run_verify, sweep_fit, verify, Outcome, SweepAxis};
