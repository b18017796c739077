//! Simulation and tooling around the tactile rendering core: file
//! formats, scene loading, trace synthesis, offline replay, and the
//! `tactile` command-line interface.

pub mod cli;
pub mod error;
pub mod formats;
pub mod meshgen;
pub mod replay;
pub mod scene;
pub mod synth;
pub mod viz;

pub use error::{Result, SimError};
