//! Experiment driver for trajectory-constrained exploration.
//!
//! Everything here is std-side plumbing around [`tace_core`]: presets,
//! seeded runs with their on-disk artifacts, cross-seed aggregation, the
//! bound-verification table, and the file formats.

pub mod aggregate;
pub mod checkpoint;
pub mod config;
pub mod exec;
pub mod heatmap;
pub mod manifest;
pub mod maze;
pub mod memory_io;
pub mod metrics;
pub mod runner;
pub mod verify;

pub use config::{Algorithm, EnvSpec, Preset, Presets};
pub use exec::Threaded;
pub use runner::{RunSpec, SeedResult};
