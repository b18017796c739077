//! Calibration files: the stored per-region profile and the session
//! script that produces one.
//!
//! Profile: `region<i> = <uA>` for i in 0..9 plus `scale = <factor>`,
//! `#` comments allowed, any order, every region present exactly once.
//! Session script: one `<region> <amplitude_uA>` step per line in the
//! order the operator performed them.

use std::fmt::Write as _;
use std::path::Path;

use tactile_core::array::CALIBRATION_REGIONS;
use tactile_core::stimulus::{CalibrationProfile, CalibrationStep};

use crate::error::{Result, SimError};

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> SimError {
    SimError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

pub fn parse_profile(text: &str, path: &Path) -> Result<CalibrationProfile> {
    let mut amplitudes = [None::<u32>; CALIBRATION_REGIONS];
    let mut scale = None::<f64>;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| parse_err(path, line_no, "expected `key = value`"))?;
        if key == "scale" {
            if scale.is_some() {
                return Err(parse_err(path, line_no, "duplicate scale"));
            }
            let s: f64 = value
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad scale {value:?}")))?;
            scale = Some(s);
        } else if let Some(region) = key.strip_prefix("region") {
            let r: usize = region
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad region key {key:?}")))?;
            if r >= CALIBRATION_REGIONS {
                return Err(parse_err(path, line_no, format!("region {r} out of range")));
            }
            if amplitudes[r].is_some() {
                return Err(parse_err(path, line_no, format!("duplicate region {r}")));
            }
            let a: u32 = value
                .parse()
                .map_err(|_| parse_err(path, line_no, format!("bad amplitude {value:?}")))?;
            amplitudes[r] = Some(a);
        } else {
            return Err(parse_err(path, line_no, format!("unknown key {key:?}")));
        }
    }

    let mut profile = CalibrationProfile::default();
    for (r, a) in amplitudes.iter().enumerate() {
        profile.region_amplitude_ua[r] = a.ok_or_else(|| SimError::Format {
            path: path.to_path_buf(),
            message: format!("region{r} missing"),
        })?;
    }
    profile.global_scale = scale.unwrap_or(1.0);
    profile.validate().map_err(|e| SimError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(profile)
}

pub fn load_profile(path: &Path) -> Result<CalibrationProfile> {
    let text = crate::error::read_to_string(path)?;
    parse_profile(&text, path)
}

pub fn write_profile(profile: &CalibrationProfile, comment: &str) -> String {
    let mut out = String::new();
    if !comment.is_empty() {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for (r, a) in profile.region_amplitude_ua.iter().enumerate() {
        let _ = writeln!(out, "region{r} = {a}");
    }
    let _ = writeln!(out, "scale = {}", profile.global_scale);
    out
}

/// Parse a session script into ordered steps.
pub fn parse_session(text: &str, path: &Path) -> Result<Vec<CalibrationStep>> {
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (region, amplitude) = match (fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(a), None) => (r, a),
            _ => return Err(parse_err(path, line_no, "expected `<region> <amplitude_uA>`")),
        };
        let region: u8 = region
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad region {region:?}")))?;
        let amplitude_ua: u32 = amplitude
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad amplitude {amplitude:?}")))?;
        steps.push(CalibrationStep { region, amplitude_ua });
    }
    Ok(steps)
}

pub fn load_session(path: &Path) -> Result<Vec<CalibrationStep>> {
    let text = crate::error::read_to_string(path)?;
    parse_session(&text, path)
}
