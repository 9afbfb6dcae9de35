//! Experiment registry, configuration, parallel replica execution and output
//! formats for the anisotropic-walk simulator in `anisowalk_core`.

pub mod config;
mod error;
pub mod experiments;
pub mod export;
pub mod outcome;
pub mod runner;

pub use anisowalk_core as core;
pub use error::{LabError, LabResult};
