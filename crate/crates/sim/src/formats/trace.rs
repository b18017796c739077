//! Pose trace CSV: the recorded finger path a replay consumes.
//!
//! Strict ten-column format with a mandatory header:
//! `t,px,py,pz,nx,ny,nz,fx,fy,fz` — time in seconds, pad centre
//! position in millimetres, pad normal, pad forward. Timestamps must
//! increase strictly and each row's axes must form an orthonormal pair
//! within 1e-6, so every downstream consumer can trust the frames.

use std::fmt::Write as _;
use std::path::Path;

use tactile_core::context::FingerPose;
use tactile_core::Vec3;

use crate::error::{Result, SimError};

pub const TRACE_HEADER: &str = "t,px,py,pz,nx,ny,nz,fx,fy,fz";
/// Largest tolerated deviation of a row's axes from orthonormality.
pub const ORTHONORMALITY_TOL: f64 = 1e-6;

/// A finger path: two or more poses with strictly increasing time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub poses: Vec<FingerPose>,
}

impl Trace {
    pub fn start_time(&self) -> f64 {
        self.poses.first().map(|p| p.t).unwrap_or(0.0)
    }

    pub fn end_time(&self) -> f64 {
        self.poses.last().map(|p| p.t).unwrap_or(0.0)
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    /// Pose at time `t`: positions interpolate linearly, the frame axes
    /// interpolate linearly and renormalize (adequate for the small
    /// per-tick rotations a 72 Hz trace carries). Clamps to the ends.
    pub fn sample(&self, t: f64) -> FingerPose {
        let poses = &self.poses;
        if t <= poses[0].t {
            return FingerPose { t, ..poses[0] };
        }
        if t >= poses[poses.len() - 1].t {
            return FingerPose { t, ..poses[poses.len() - 1] };
        }
        // Binary search for the surrounding segment.
        let mut lo = 0usize;
        let mut hi = poses.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if poses[mid].t <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (a, b) = (&poses[lo], &poses[hi]);
        let u = (t - a.t) / (b.t - a.t);
        let lerp = |x: Vec3, y: Vec3| x + (y - x) * u;
        let normal = lerp(a.pad_normal, b.pad_normal)
            .normalized()
            .unwrap_or(a.pad_normal);
        let forward_raw = lerp(a.pad_forward, b.pad_forward);
        // Re-orthogonalize forward against the blended normal.
        let forward = tactile_core::geometry::mesh::reject(forward_raw, normal)
            .normalized()
            .unwrap_or(a.pad_forward);
        FingerPose {
            t,
            position: lerp(a.position, b.position),
            pad_normal: normal,
            pad_forward: forward,
        }
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> SimError {
    SimError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Parse a trace CSV. `path` is used for error messages only.
pub fn parse_trace(text: &str, path: &Path) -> Result<Trace> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((i, l)) => break (i, l.trim()),
            None => {
                return Err(SimError::Format {
                    path: path.to_path_buf(),
                    message: "empty trace".into(),
                })
            }
        }
    };
    if header.1 != TRACE_HEADER {
        return Err(parse_err(
            path,
            header.0 + 1,
            format!("header must be `{TRACE_HEADER}`, got `{}`", header.1),
        ));
    }

    let mut poses: Vec<FingerPose> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 10 {
            return Err(parse_err(path, line_no, format!("expected 10 fields, got {}", fields.len())));
        }
        let mut vals = [0.0f64; 10];
        for (i, f) in fields.iter().enumerate() {
            vals[i] = f
                .parse::<f64>()
                .map_err(|_| parse_err(path, line_no, format!("bad number {f:?}")))?;
            if !vals[i].is_finite() {
                return Err(parse_err(path, line_no, "non-finite value"));
            }
        }
        let pose = FingerPose::new(
            vals[0],
            Vec3::new(vals[1], vals[2], vals[3]),
            Vec3::new(vals[4], vals[5], vals[6]),
            Vec3::new(vals[7], vals[8], vals[9]),
        );
        if let Some(prev) = poses.last() {
            if pose.t <= prev.t {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("time {} does not increase past {}", pose.t, prev.t),
                ));
            }
        }
        let err = pose.orthonormality_error();
        if err > ORTHONORMALITY_TOL {
            return Err(parse_err(
                path,
                line_no,
                format!("pad axes deviate from orthonormal by {err:.2e} (tolerance {ORTHONORMALITY_TOL:.0e})"),
            ));
        }
        poses.push(pose);
    }
    if poses.len() < 2 {
        return Err(SimError::Format {
            path: path.to_path_buf(),
            message: format!("trace needs at least 2 poses, got {}", poses.len()),
        });
    }
    Ok(Trace { poses })
}

pub fn load_trace(path: &Path) -> Result<Trace> {
    let text = crate::error::read_to_string(path)?;
    parse_trace(&text, path)
}

/// Serialize a trace; numbers use shortest round-trip formatting so a
/// write/read cycle is lossless.
pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::with_capacity(trace.poses.len() * 64);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for p in &trace.poses {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            p.t,
            p.position.x,
            p.position.y,
            p.position.z,
            p.pad_normal.x,
            p.pad_normal.y,
            p.pad_normal.z,
            p.pad_forward.x,
            p.pad_forward.y,
            p.pad_forward.z
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> std::path::PathBuf {
        std::path::PathBuf::from("test.csv")
    }

    fn two_pose_text() -> String {
        format!("{TRACE_HEADER}\n0,0,0,10,0,0,-1,0,1,0\n1,0,0,5,0,0,-1,0,1,0\n")
    }

    #[test]
    fn parses_a_valid_trace() {
        let trace = parse_trace(&two_pose_text(), &p()).unwrap();
        assert_eq!(trace.poses.len(), 2);
        assert_eq!(trace.duration(), 1.0);
        assert_eq!(trace.poses[0].position, Vec3::new(0.0, 0.0, 10.0));
    }

    #[test]
    fn rejects_header_and_shape_problems() {
        assert!(parse_trace("px,py\n", &p()).is_err());
        let short = format!("{TRACE_HEADER}\n0,0,0,10,0,0,-1,0,1\n");
        assert!(parse_trace(&short, &p()).is_err());
        let one_row = format!("{TRACE_HEADER}\n0,0,0,10,0,0,-1,0,1,0\n");
        assert!(parse_trace(&one_row, &p()).is_err());
    }

    #[test]
    fn rejects_non_monotonic_time_and_skewed_axes() {
        let backwards = format!(
            "{TRACE_HEADER}\n1,0,0,10,0,0,-1,0,1,0\n0.5,0,0,5,0,0,-1,0,1,0\n"
        );
        assert!(matches!(
            parse_trace(&backwards, &p()),
            Err(SimError::Parse { line: 3, .. })
        ));
        let skewed = format!(
            "{TRACE_HEADER}\n0,0,0,10,0,0,-1,0,1,0\n1,0,0,5,0,0,-1,0.01,1,0\n"
        );
        assert!(parse_trace(&skewed, &p()).is_err());
    }

    #[test]
    fn trace_round_trips_exactly() {
        let trace = parse_trace(&two_pose_text(), &p()).unwrap();
        let text = write_trace(&trace);
        let back = parse_trace(&text, &p()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn sampling_interpolates_and_clamps() {
        let trace = parse_trace(&two_pose_text(), &p()).unwrap();
        let mid = trace.sample(0.5);
        assert!((mid.position.z - 7.5).abs() < 1e-12);
        assert!(mid.orthonormality_error() < 1e-9);
        assert_eq!(trace.sample(-5.0).position.z, 10.0);
        assert_eq!(trace.sample(9.0).position.z, 5.0);
    }
}
