//! Experiment drivers for the voting game: configuration layering,
//! parameter sweeps, equilibrium reports and CSV output.

pub mod config;
pub mod csv;
pub mod error;
pub mod sweeps;

pub use config::{parse_config, ExperimentKind, ExperimentSpec, Request};
pub use error::{ExperimentError, Result};
