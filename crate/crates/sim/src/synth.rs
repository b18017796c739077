//! Synthetic finger-motion traces.
//!
//! A trace spec is a small `key = value` text describing one of four
//! motion templates; [`generate`] turns it into a pose trace sampled at
//! a fixed rate:
//!
//! * `approach` — straight-line descent along a surface normal, then a
//!   settle period at rest near the surface.
//! * `hold` — a stationary pose next to an anchor point, offset so the
//!   contact ray makes a chosen angle with a given surface tangent.
//! * `slide` — constant-velocity lateral motion at fixed hover height,
//!   optionally after a stationary lead-in.
//! * `composite` — approach, settle, then retreat: a full
//!   touch-and-release arc.
//!
//! Optional Gaussian position jitter (seeded, reproducible) roughens a
//! trace without disturbing the pad orientation.

use std::path::Path;

use tactile_core::context::FingerPose;
use tactile_core::Vec3;

use crate::error::{Result, SimError};
use crate::formats::trace::Trace;

/// Motion template of a trace spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Approach,
    Hold,
    Slide,
    Composite,
}

/// Parsed trace spec with defaults applied.
#[derive(Debug, Clone)]
pub struct TraceSpec {
    pub kind: TraceKind,
    /// Samples per second.
    pub rate_hz: f64,
    /// Gaussian position noise, millimetres (standard deviation).
    pub jitter_mm: f64,
    /// Noise seed; required when `jitter_mm > 0`.
    pub seed: Option<u64>,
    /// Surface normal / approach axis at the point of interest.
    pub normal: Vec3,
    /// Pad forward hint; projected into the pad plane. Defaults to the
    /// tangent for `hold`, else +x.
    pub pad_forward: Option<Vec3>,
    /// Surface point of interest: approach target, hold anchor, or
    /// slide start.
    pub target: Vec3,
    /// Surface tangent at the anchor (required for `hold`).
    pub tangent: Option<Vec3>,
    /// Contact-ray angle against the tangent, degrees in [-90, 90].
    pub theta_deg: f64,
    /// Horizontal offset from the hold anchor.
    pub ray_len_mm: f64,
    /// Hover height above the surface.
    pub height_mm: f64,
    /// Approach start distance above the target.
    pub start_distance_mm: f64,
    /// Approach end distance above the target. Negative values press
    /// through the surface — a real finger meets no resistance from
    /// virtual geometry.
    pub final_distance_mm: f64,
    pub speed_mm_s: f64,
    /// Slide / hold duration.
    pub duration_s: f64,
    /// Stationary time before a slide starts moving.
    pub lead_in_s: f64,
    /// Rest time after an approach reaches its final distance.
    pub settle_s: f64,
    /// Slide direction (required for `slide`); projected in-plane.
    pub direction: Option<Vec3>,
    /// Composite: rest time at the surface between approach and retreat.
    pub hold_s: f64,
    /// Composite: distance retreated after the hold.
    pub retreat_distance_mm: f64,
}

impl TraceSpec {
    pub fn new(kind: TraceKind) -> TraceSpec {
        TraceSpec {
            kind,
            rate_hz: 72.0,
            jitter_mm: 0.0,
            seed: None,
            normal: Vec3::new(0.0, 0.0, 1.0),
            pad_forward: None,
            target: Vec3::ZERO,
            tangent: None,
            theta_deg: 0.0,
            ray_len_mm: 0.6,
            height_mm: 0.5,
            start_distance_mm: 15.0,
            final_distance_mm: 0.5,
            speed_mm_s: 20.0,
            duration_s: 1.0,
            lead_in_s: 0.0,
            settle_s: 0.3,
            direction: None,
            hold_s: 0.5,
            retreat_distance_mm: 15.0,
        }
    }
}

fn parse_vec3(value: &str) -> std::result::Result<Vec3, String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {value:?}"));
    }
    let mut c = [0.0f64; 3];
    for (i, p) in parts.iter().enumerate() {
        c[i] = p.parse::<f64>().map_err(|_| format!("bad number {p:?}"))?;
        if !c[i].is_finite() {
            return Err(format!("non-finite component {p:?}"));
        }
    }
    Ok(Vec3::new(c[0], c[1], c[2]))
}

fn parse_f64(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value.parse().map_err(|_| format!("bad number {value:?}"))?;
    if !v.is_finite() {
        return Err(format!("non-finite value {value:?}"));
    }
    Ok(v)
}

/// Parse a trace spec from `key = value` text. `kind` must appear;
/// every other key has a default.
pub fn parse_spec(text: &str, path: &Path) -> Result<TraceSpec> {
    let mut kind: Option<TraceKind> = None;
    let mut assignments: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| SimError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: format!("expected key = value, got {line:?}"),
        })?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key == "kind" {
            kind = Some(match value.as_str() {
                "approach" => TraceKind::Approach,
                "hold" => TraceKind::Hold,
                "slide" => TraceKind::Slide,
                "composite" => TraceKind::Composite,
                other => {
                    return Err(SimError::Parse {
                        path: path.to_path_buf(),
                        line: line_no,
                        message: format!(
                            "unknown kind {other:?}, expected approach|hold|slide|composite"
                        ),
                    })
                }
            });
        } else {
            assignments.push((line_no, key, value));
        }
    }

    let kind = kind.ok_or_else(|| SimError::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: "missing required key: kind".to_string(),
    })?;
    let mut spec = TraceSpec::new(kind);

    for (line_no, key, value) in assignments {
        let result: std::result::Result<(), String> = (|| {
            match key.as_str() {
                "rate_hz" => spec.rate_hz = parse_f64(&value)?,
                "jitter_mm" => spec.jitter_mm = parse_f64(&value)?,
                "seed" => {
                    spec.seed =
                        Some(value.parse::<u64>().map_err(|_| format!("bad seed {value:?}"))?)
                }
                "normal" => spec.normal = parse_vec3(&value)?,
                "pad_forward" => spec.pad_forward = Some(parse_vec3(&value)?),
                "target" | "anchor" | "start" => spec.target = parse_vec3(&value)?,
                "tangent" => spec.tangent = Some(parse_vec3(&value)?),
                "theta_deg" => spec.theta_deg = parse_f64(&value)?,
                "ray_len_mm" => spec.ray_len_mm = parse_f64(&value)?,
                "height_mm" => spec.height_mm = parse_f64(&value)?,
                "start_distance_mm" => spec.start_distance_mm = parse_f64(&value)?,
                "final_distance_mm" => spec.final_distance_mm = parse_f64(&value)?,
                "speed_mm_s" => spec.speed_mm_s = parse_f64(&value)?,
                "duration_s" => spec.duration_s = parse_f64(&value)?,
                "lead_in_s" => spec.lead_in_s = parse_f64(&value)?,
                "settle_s" => spec.settle_s = parse_f64(&value)?,
                "direction" => spec.direction = Some(parse_vec3(&value)?),
                "hold_s" => spec.hold_s = parse_f64(&value)?,
                "retreat_distance_mm" => spec.retreat_distance_mm = parse_f64(&value)?,
                other => return Err(format!("unknown key {other:?}")),
            }
            Ok(())
        })();
        result.map_err(|message| SimError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        })?;
    }
    Ok(spec)
}

pub fn load_spec(path: &Path) -> Result<TraceSpec> {
    let text = crate::error::read_to_string(path)?;
    parse_spec(&text, path)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_open(state: &mut u64) -> f64 {
    // (0, 1]: never zero, safe under ln().
    (((splitmix64(state) >> 11) + 1) as f64) / (1u64 << 53) as f64
}

fn gaussian(state: &mut u64) -> f64 {
    let u1 = unit_open(state);
    let u2 = unit_open(state);
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

fn config_err(message: impl Into<String>) -> SimError {
    SimError::Config(message.into())
}

/// Sample times covering `[0, total]` at `rate_hz`, inclusive of both
/// endpoints.
fn sample_times(total: f64, rate_hz: f64) -> Vec<f64> {
    let n = (total * rate_hz + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|i| i as f64 / rate_hz).collect();
    if *times.last().unwrap() < total - 1e-9 {
        times.push(total);
    }
    times
}

fn in_plane_unit(v: Vec3, normal: Vec3, what: &str) -> Result<Vec3> {
    let rejected = v - normal * v.dot(normal);
    rejected
        .normalized()
        .ok_or_else(|| config_err(format!("{what} is parallel to the surface normal")))
}

/// Generate the pose trace described by `spec`.
pub fn generate(spec: &TraceSpec) -> Result<Trace> {
    if !(1.0..=1000.0).contains(&spec.rate_hz) {
        return Err(config_err(format!("rate_hz {} outside 1..=1000", spec.rate_hz)));
    }
    if spec.jitter_mm < 0.0 {
        return Err(config_err("jitter_mm must be >= 0"));
    }
    if spec.jitter_mm > 0.0 && spec.seed.is_none() {
        return Err(config_err("jitter_mm > 0 requires a seed"));
    }
    let normal = spec
        .normal
        .normalized()
        .ok_or_else(|| config_err("normal must be a nonzero vector"))?;

    // Pad frame: normal plus an in-plane forward.
    let forward_hint = match (spec.pad_forward, spec.kind, spec.tangent) {
        (Some(f), _, _) => f,
        (None, TraceKind::Hold, Some(t)) => t,
        _ => Vec3::new(1.0, 0.0, 0.0),
    };
    let forward = {
        let rejected = forward_hint - normal * forward_hint.dot(normal);
        match rejected.normalized() {
            Some(f) => f,
            // Hint parallel to the normal: fall back to any in-plane axis.
            None => in_plane_unit(
                if normal.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) },
                normal,
                "pad forward",
            )?,
        }
    };

    // Piecewise-linear position program: (time, position) knots.
    let knots: Vec<(f64, Vec3)> = match spec.kind {
        TraceKind::Approach => {
            if spec.speed_mm_s <= 0.0 {
                return Err(config_err("speed_mm_s must be > 0"));
            }
            if spec.final_distance_mm >= spec.start_distance_mm {
                return Err(config_err("final_distance_mm must be below start_distance_mm"));
            }
            let travel = spec.start_distance_mm - spec.final_distance_mm;
            let t_touch = travel / spec.speed_mm_s;
            let start = spec.target + normal * spec.start_distance_mm;
            let end = spec.target + normal * spec.final_distance_mm;
            vec![(0.0, start), (t_touch, end), (t_touch + spec.settle_s.max(0.0), end)]
        }
        TraceKind::Hold => {
            if spec.duration_s <= 0.0 {
                return Err(config_err("duration_s must be > 0"));
            }
            if !(-90.0..=90.0).contains(&spec.theta_deg) {
                return Err(config_err("theta_deg must lie in [-90, 90]"));
            }
            let tangent = spec
                .tangent
                .ok_or_else(|| config_err("hold requires a tangent"))?;
            let tangent = in_plane_unit(tangent, normal, "tangent")?;
            let side = normal.cross(tangent);
            let theta = spec.theta_deg * core::f64::consts::PI / 180.0;
            let ray_h = tangent * theta.cos() + side * theta.sin();
            let position =
                spec.target - ray_h * spec.ray_len_mm + normal * spec.height_mm;
            vec![(0.0, position), (spec.duration_s, position)]
        }
        TraceKind::Slide => {
            if spec.speed_mm_s <= 0.0 {
                return Err(config_err("speed_mm_s must be > 0"));
            }
            if spec.duration_s <= 0.0 {
                return Err(config_err("duration_s must be > 0"));
            }
            let direction = spec
                .direction
                .ok_or_else(|| config_err("slide requires a direction"))?;
            let direction = in_plane_unit(direction, normal, "direction")?;
            let start = spec.target + normal * spec.height_mm;
            let end = start + direction * (spec.speed_mm_s * spec.duration_s);
            let lead = spec.lead_in_s.max(0.0);
            if lead > 0.0 {
                vec![(0.0, start), (lead, start), (lead + spec.duration_s, end)]
            } else {
                vec![(0.0, start), (spec.duration_s, end)]
            }
        }
        TraceKind::Composite => {
            if spec.speed_mm_s <= 0.0 {
                return Err(config_err("speed_mm_s must be > 0"));
            }
            if spec.final_distance_mm >= spec.start_distance_mm {
                return Err(config_err("final_distance_mm must be below start_distance_mm"));
            }
            let travel = spec.start_distance_mm - spec.final_distance_mm;
            let t_touch = travel / spec.speed_mm_s;
            let t_leave = t_touch + spec.hold_s.max(0.0);
            let t_gone = t_leave + spec.retreat_distance_mm / spec.speed_mm_s;
            let start = spec.target + normal * spec.start_distance_mm;
            let near = spec.target + normal * spec.final_distance_mm;
            let far = spec.target + normal * (spec.final_distance_mm + spec.retreat_distance_mm);
            vec![(0.0, start), (t_touch, near), (t_leave, near), (t_gone, far)]
        }
    };

    let total = knots.last().unwrap().0;
    let mut rng = spec.seed.unwrap_or(0);
    let mut poses = Vec::new();
    for t in sample_times(total, spec.rate_hz) {
        // Evaluate the piecewise-linear program at t.
        let mut position = knots.last().unwrap().1;
        for w in knots.windows(2) {
            let ((t0, p0), (t1, p1)) = (w[0], w[1]);
            if t <= t1 {
                let span = t1 - t0;
                let s = if span > 0.0 { ((t - t0) / span).clamp(0.0, 1.0) } else { 1.0 };
                position = p0 + (p1 - p0) * s;
                break;
            }
        }
        if spec.jitter_mm > 0.0 {
            position += Vec3::new(gaussian(&mut rng), gaussian(&mut rng), gaussian(&mut rng))
                * spec.jitter_mm;
        }
        poses.push(FingerPose { t, position, pad_normal: normal, pad_forward: forward });
    }
    if poses.len() < 2 {
        return Err(config_err("trace would contain fewer than two samples"));
    }
    Ok(Trace { poses })
}
