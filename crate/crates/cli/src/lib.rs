//! Library half of the `bargmann-lab` command line tool: strict JSON
//! scenario configuration, scenario execution, and deterministic report
//! emission. The binary in `main.rs` is a thin argument-parsing shell over
//! this crate.

pub mod config;
pub mod scenario;
