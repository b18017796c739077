//! File formats the simulator reads and writes.

pub mod calibration;
pub mod config;
pub mod logs;
pub mod obj;
pub mod trace;
