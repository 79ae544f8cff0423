//! Experiment harness: configuration, world loading, parallel sweeps, CSV
//! and SVG output, and the command bodies behind the `worldlens` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod figure4;
pub mod output;
pub mod plot;
pub mod sweep;
pub mod worlds;

pub use config::{AgentMode, ExperimentConfig, TripleSelection, WorldSource};
pub use error::HarnessError;
pub use sweep::{Cell, CellResult, SweepRow};
