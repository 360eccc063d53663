//! Verification suites and computation commands for the equivariant Toda
//! hierarchy.

pub mod compute;
pub mod config;
pub mod registry;
pub mod render;
pub mod report;

pub use compute::{run_compute, Computation};
pub use config::{ConfigError, Fault, Format, RunConfig};
pub use report::{emit_report, run_verify, CheckRecord, Report, Status};
