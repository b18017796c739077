//! Core engine for electro-tactile rendering on a 32-electrode fingertip
//! array: contact queries against 3D geometry, interaction state tracking,
//! activation-pattern synthesis, and microsecond stimulation scheduling.
//!
//! The crate is `no_std`-compatible (with `alloc`); everything here is
//! deterministic and free of IO. File formats, trace replay and the CLI
//! live in the companion `tactile-sim` crate.
//!
//! Pipeline overview, one 72 Hz tick at a time:
//!
//! 1. [`geometry::query_contact`] maps the finger-pad centre to a surface
//!    contact: closest point, signed distance, feature class, texture level.
//! 2. [`context`] turns pose pairs into smoothed approach/slide velocities,
//!    quantized movement directions and contact orientation, and advances
//!    the idle/approaching/interacting state machine.
//! 3. [`patterns`] synthesizes a 6x6 activation frame for the current
//!    state: expanding rings and feature lines during approach,
//!    orientation-shifted contact patterns, texture-coupled pattern shifts
//!    during sliding.
//! 4. [`stimulus`] compiles a frame into a pulse schedule inside the 8 ms
//!    stimulation cycle and packs it into the 35-byte device frame.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod array;
pub mod context;
pub mod geometry;
pub mod math;
pub mod patterns;
pub mod stimulus;

pub use math::{Basis, Vec3};
