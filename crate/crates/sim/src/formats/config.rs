//! Flat key=value configuration for the simulator.
//!
//! One `section.key = value` pair per line, `#` comments. Unknown keys
//! are rejected by name so a typo cannot silently fall back to a
//! default; every key is range-checked on assignment. The same
//! `key=value` grammar backs `--set` overrides on the command line.

use std::path::Path;

use tactile_core::context::ContextConfig;
use tactile_core::geometry::FeatureConfig;
use tactile_core::patterns::SynthesisParams;
use tactile_core::stimulus::{CompileMode, AMPLITUDE_MAX_UA};

use crate::error::{Result, SimError};

/// Replay-loop settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayConfig {
    /// Tick rate of the pose pipeline, Hz.
    pub rate_hz: f64,
    /// Depth of the frame queue between synthesis and compilation.
    pub queue_depth: usize,
    /// Per-tick time budget, microseconds.
    pub budget_us: u64,
    /// Finger travel per synthesis substep, mm: one tick synthesizes
    /// `ceil(travel / substep)` frames so fast motion cannot skip
    /// pattern stages.
    pub substep_mm: f64,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        ReplayConfig { rate_hz: 72.0, queue_depth: 4, budget_us: 14_000, substep_mm: 2.0 }
    }
}

/// Every tunable of the pipeline in one place.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub context: ContextConfig,
    pub synthesis: SynthesisParams,
    pub features: FeatureConfig,
    pub replay: ReplayConfig,
    /// Slot assignment for compiled schedules.
    pub fixed_slots: bool,
    /// Global amplitude scale applied on top of the calibration profile.
    pub global_scale: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig::new()
    }
}

impl SimConfig {
    pub fn new() -> SimConfig {
        SimConfig {
            context: ContextConfig::default(),
            synthesis: SynthesisParams::default(),
            features: FeatureConfig::default(),
            replay: ReplayConfig::default(),
            fixed_slots: false,
            global_scale: 1.0,
        }
    }

    pub fn compile_mode(&self) -> CompileMode {
        if self.fixed_slots { CompileMode::FixedSlots } else { CompileMode::SkipInactive }
    }

    /// Assign one `section.key` to a raw string value, with range checks.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |msg: String| Err(SimError::Config(msg));
        let f = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| SimError::Config(format!("{key}: `{value}` is not a number")))
        };
        let u = |v: &str| -> Result<u64> {
            v.parse::<u64>()
                .map_err(|_| SimError::Config(format!("{key}: `{value}` is not a non-negative integer")))
        };
        let b = |v: &str| -> Result<bool> {
            match v {
                "true" | "1" => Ok(true),
                "false" | "0" => Ok(false),
                _ => Err(SimError::Config(format!("{key}: `{value}` is not a boolean"))),
            }
        };

        match key {
            "context.contact_threshold_mm" => {
                let x = f(value)?;
                if x <= 0.0 {
                    return bad(format!("{key} must be positive"));
                }
                self.context.contact_threshold_mm = x;
            }
            "context.release_threshold_mm" => {
                let x = f(value)?;
                if x <= 0.0 {
                    return bad(format!("{key} must be positive"));
                }
                self.context.release_threshold_mm = x;
            }
            "context.stability_window_ticks" => {
                let x = u(value)?;
                if x == 0 || x > 1_000 {
                    return bad(format!("{key} must be in 1..=1000"));
                }
                self.context.stability_window_ticks = x as u32;
            }
            "context.stillness_threshold_mm_s" => {
                let x = f(value)?;
                if x < 0.0 {
                    return bad(format!("{key} must be non-negative"));
                }
                self.context.stillness_threshold_mm_s = x;
            }
            "context.smoothing_lambda" => {
                let x = f(value)?;
                if !(x > 0.0 && x <= 1.0) {
                    return bad(format!("{key} must be in (0, 1]"));
                }
                self.context.smoothing_lambda = x;
            }
            "synthesis.alpha" => {
                let x = f(value)?;
                if x <= 0.0 {
                    return bad(format!("{key} must be positive"));
                }
                self.synthesis.alpha = x;
            }
            "synthesis.beta" => {
                let x: i64 = value
                    .parse()
                    .map_err(|_| SimError::Config(format!("{key}: `{value}` is not an integer")))?;
                if x != 1 && x != -1 {
                    return bad(format!("{key} must be 1 or -1"));
                }
                self.synthesis.beta = x as i32;
            }
            "synthesis.max_ring_radius" => {
                let x = u(value)?;
                if x > 2 {
                    return bad(format!("{key} must be in 0..=2"));
                }
                self.synthesis.max_ring_radius = x as u32;
            }
            "features.sharp_dihedral_deg" => {
                let x = f(value)?;
                if !(0.0..=180.0).contains(&x) {
                    return bad(format!("{key} must be in [0, 180]"));
                }
                self.features.sharp_dihedral_deg = x;
            }
            "features.corner_deficit_deg" => {
                let x = f(value)?;
                if !(0.0..=360.0).contains(&x) {
                    return bad(format!("{key} must be in [0, 360]"));
                }
                self.features.corner_deficit_deg = x;
            }
            "features.feature_band_mm" => {
                let x = f(value)?;
                if x < 0.0 {
                    return bad(format!("{key} must be non-negative"));
                }
                self.features.feature_band_mm = x;
            }
            "replay.rate_hz" => {
                let x = f(value)?;
                if !(1.0..=10_000.0).contains(&x) {
                    return bad(format!("{key} must be in [1, 10000]"));
                }
                self.replay.rate_hz = x;
            }
            "replay.queue_depth" => {
                let x = u(value)?;
                if x == 0 || x > 64 {
                    return bad(format!("{key} must be in 1..=64"));
                }
                self.replay.queue_depth = x as usize;
            }
            "replay.budget_us" => {
                let x = u(value)?;
                if x == 0 {
                    return bad(format!("{key} must be positive"));
                }
                self.replay.budget_us = x;
            }
            "replay.substep_mm" => {
                let x = f(value)?;
                if x <= 0.0 {
                    return bad(format!("{key} must be positive"));
                }
                self.replay.substep_mm = x;
            }
            "stimulus.fixed_slots" => self.fixed_slots = b(value)?,
            "stimulus.global_scale" => {
                let x = f(value)?;
                if !(0.0..=(AMPLITUDE_MAX_UA as f64)).contains(&x) {
                    return bad(format!("{key} must be in [0, {AMPLITUDE_MAX_UA}]"));
                }
                self.global_scale = x;
            }
            _ => {
                return Err(SimError::Config(format!(
                    "unknown key `{key}` (see `{DOCUMENTED_KEYS_HINT}`)"
                )))
            }
        }
        self.cross_check()
    }

    /// Invariants that span more than one key.
    pub fn cross_check(&self) -> Result<()> {
        if self.context.release_threshold_mm <= self.context.contact_threshold_mm {
            return Err(SimError::Config(
                "context.release_threshold_mm must exceed context.contact_threshold_mm".into(),
            ));
        }
        Ok(())
    }

    /// Parse a config file's text on top of the current values.
    pub fn apply_text(&mut self, text: &str, path: &Path) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SimError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| SimError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SimConfig> {
        let mut cfg = SimConfig::new();
        let text = crate::error::read_to_string(path)?;
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// Apply a `key=value` override as given on the command line.
    pub fn apply_set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| SimError::Config(format!("--set needs `key=value`, got `{assignment}`")))?;
        self.set(key.trim(), value.trim())
    }
}

const DOCUMENTED_KEYS_HINT: &str = "README: configuration keys";

/// All accepted keys, for documentation and error listings.
pub const CONFIG_KEYS: [&str; 17] = [
    "context.contact_threshold_mm",
    "context.release_threshold_mm",
    "context.stability_window_ticks",
    "context.stillness_threshold_mm_s",
    "context.smoothing_lambda",
    "synthesis.alpha",
    "synthesis.beta",
    "synthesis.max_ring_radius",
    "features.sharp_dihedral_deg",
    "features.corner_deficit_deg",
    "features.feature_band_mm",
    "replay.rate_hz",
    "replay.queue_depth",
    "replay.budget_us",
    "replay.substep_mm",
    "stimulus.fixed_slots",
    "stimulus.global_scale",
];
