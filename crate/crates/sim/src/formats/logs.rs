//! Replay output formats: the frame log, the schedule CSV, and the
//! run summary.
//!
//! The frame log is the replay's ground truth — one line per frame
//! delivered to the output stage, all fields integers or fixed tokens,
//! so two runs over the same inputs produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use tactile_core::context::Mode;
use tactile_core::geometry::Feature;
use tactile_core::stimulus::StimulationSchedule;

use crate::error::{Result, SimError};

pub const SCHEDULE_HEADER: &str = "cycle,electrode,start_us,width_us,amp_uA";

/// One delivered frame: `<tick> <mode> <feature|-> <ring> <shifts> <grid>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRecord {
    pub tick: u64,
    pub mode: Mode,
    pub feature: Option<Feature>,
    pub ring: u32,
    pub shift_count: u32,
    /// Row-major 36-character grid, `#` active, `.` inactive.
    pub grid: String,
}

impl FrameRecord {
    pub fn to_line(&self) -> String {
        let feature = match self.feature {
            Some(Feature::Face) => "Face",
            Some(Feature::Edge) => "Edge",
            Some(Feature::Corner) => "Corner",
            None => "-",
        };
        format!(
            "{} {} {} {} {} {}",
            self.tick, self.mode, feature, self.ring, self.shift_count, self.grid
        )
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> SimError {
    SimError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

pub fn parse_frame_log(text: &str, path: &Path) -> Result<Vec<FrameRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_err(path, line_no, format!("expected 6 fields, got {}", fields.len())));
        }
        let tick: u64 = fields[0]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad tick {:?}", fields[0])))?;
        let mode = match fields[1] {
            "Idle" => Mode::Idle,
            "Approaching" => Mode::Approaching,
            "Interacting" => Mode::Interacting,
            other => return Err(parse_err(path, line_no, format!("unknown mode {other:?}"))),
        };
        let feature = match fields[2] {
            "Face" => Some(Feature::Face),
            "Edge" => Some(Feature::Edge),
            "Corner" => Some(Feature::Corner),
            "-" => None,
            other => return Err(parse_err(path, line_no, format!("unknown feature {other:?}"))),
        };
        let ring: u32 = fields[3]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad ring {:?}", fields[3])))?;
        let shift_count: u32 = fields[4]
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad shift count {:?}", fields[4])))?;
        let grid = fields[5];
        if grid.len() != 36 || grid.bytes().any(|b| b != b'#' && b != b'.') {
            return Err(parse_err(path, line_no, "grid must be 36 cells of `#` or `.`"));
        }
        records.push(FrameRecord {
            tick,
            mode,
            feature,
            ring,
            shift_count,
            grid: grid.to_string(),
        });
    }
    Ok(records)
}

pub fn load_frame_log(path: &std::path::Path) -> Result<Vec<FrameRecord>> {
    let text = crate::error::read_to_string(path)?;
    parse_frame_log(&text, path)
}

pub fn write_frame_log(records: &[FrameRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 64);
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

/// Append one compiled cycle to a schedule CSV body.
pub fn append_schedule_csv(out: &mut String, cycle: u64, schedule: &StimulationSchedule) {
    for e in &schedule.events {
        let _ = writeln!(
            out,
            "{cycle},{},{},{},{}",
            e.electrode, e.start_us, e.width_us, e.amplitude_ua
        );
    }
}

/// Serialize summary metrics as `key = value` lines, in given order.
pub fn write_summary(entries: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
