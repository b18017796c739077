//! Frame-log visualization: text grids and a single-frame SVG.

use std::fmt::Write as _;

use crate::error::{Result, SimError};
use crate::formats::logs::FrameRecord;

/// Lattice geometry used for rendering: 6x6 grid with the four corner
/// cells physically absent.
const SIDE: usize = 6;

fn is_corner(row: usize, col: usize) -> bool {
    (row == 0 || row == SIDE - 1) && (col == 0 || col == SIDE - 1)
}

/// Parse a frame selection: `N` for one frame or `A-B` inclusive.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = |msg: String| SimError::Range(msg);
    let parse_one = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| bad(format!("bad frame index {p:?}")))
    };
    match s.split_once('-') {
        Some((a, b)) => {
            let (lo, hi) = (parse_one(a)?, parse_one(b)?);
            if lo > hi {
                return Err(bad(format!("empty range {s:?}")));
            }
            Ok((lo, hi))
        }
        None => {
            let i = parse_one(s)?;
            Ok((i, i))
        }
    }
}

fn clamp_range(range: Option<(usize, usize)>, len: usize) -> Result<(usize, usize)> {
    let (lo, hi) = range.unwrap_or((0, len.saturating_sub(1)));
    if len == 0 {
        return Err(SimError::Range("frame log is empty".to_string()));
    }
    if hi >= len {
        return Err(SimError::Range(format!(
            "range {lo}-{hi} exceeds the last frame index {}",
            len - 1
        )));
    }
    Ok((lo, hi))
}

fn frame_header(index: usize, record: &FrameRecord) -> String {
    let feature = record.feature.map_or("-".to_string(), |f| f.to_string());
    format!(
        "frame {index}  tick {}  {}  {}  ring {}  shifts {}",
        record.tick, record.mode, feature, record.ring, record.shift_count
    )
}

/// Render selected frames as text grids. Active cells print `#`,
/// inactive `.`, and absent corner positions are blank.
pub fn render_text(records: &[FrameRecord], range: Option<(usize, usize)>) -> Result<String> {
    let (lo, hi) = clamp_range(range, records.len())?;
    let mut out = String::new();
    for (index, record) in records.iter().enumerate().take(hi + 1).skip(lo) {
        let _ = writeln!(out, "{}", frame_header(index, record));
        let grid: Vec<char> = record.grid.chars().collect();
        for row in 0..SIDE {
            let mut line = String::new();
            for col in 0..SIDE {
                if col > 0 {
                    line.push(' ');
                }
                line.push(if is_corner(row, col) { ' ' } else { grid[row * SIDE + col] });
            }
            let _ = writeln!(out, "  {}", line.trim_end());
        }
        out.push('\n');
    }
    Ok(out)
}

/// Render one frame as a standalone SVG: one circle per physical
/// electrode, filled when active.
pub fn render_svg(record: &FrameRecord, index: usize) -> String {
    // 2mm pitch, 1.4mm pads, drawn at 20 px/mm with a 2mm margin.
    const SCALE: f64 = 20.0;
    const PITCH_MM: f64 = 2.0;
    const PAD_RADIUS_MM: f64 = 0.7;
    const MARGIN_MM: f64 = 2.0;
    let size = ((SIDE - 1) as f64 * PITCH_MM + 2.0 * MARGIN_MM) * SCALE;
    let grid: Vec<char> = record.grid.chars().collect();

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(out, "  <title>{}</title>", frame_header(index, record));
    let _ = writeln!(out, "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
    for row in 0..SIDE {
        for col in 0..SIDE {
            if is_corner(row, col) {
                continue;
            }
            let cx = (MARGIN_MM + col as f64 * PITCH_MM) * SCALE;
            let cy = (MARGIN_MM + row as f64 * PITCH_MM) * SCALE;
            let r = PAD_RADIUS_MM * SCALE;
            let fill = if grid[row * SIDE + col] == '#' { "#1d4ed8" } else { "none" };
            let _ = writeln!(
                out,
                "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"{fill}\" stroke=\"#334155\" stroke-width=\"1.5\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tactile_core::context::Mode;

    fn record(grid: &str) -> FrameRecord {
        FrameRecord {
            tick: 7,
            mode: Mode::Interacting,
            feature: None,
            ring: 1,
            shift_count: 3,
            grid: grid.to_string(),
        }
    }

    #[test]
    fn text_rendering_blanks_the_corners() {
        let records = vec![record(&"#".repeat(36))];
        let text = render_text(&records, None).unwrap();
        assert!(text.contains("frame 0  tick 7  Interacting  -  ring 1  shifts 3"));
        let rows: Vec<&str> = text.lines().skip(1).take(6).collect();
        // Top row: corners blank even though the raw grid says '#'.
        assert_eq!(rows[0].trim_end(), "    # # # #");
        assert_eq!(rows[2].trim_end(), "  # # # # # #");
    }

    #[test]
    fn range_selection_and_errors() {
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert_eq!(parse_range("2-9").unwrap(), (2, 9));
        assert!(matches!(parse_range("9-2"), Err(SimError::Range(_))));
        assert!(matches!(parse_range("x"), Err(SimError::Range(_))));
        let records = vec![record(&".".repeat(36)); 3];
        assert!(render_text(&records, Some((1, 2))).is_ok());
        let err = render_text(&records, Some((1, 3))).unwrap_err();
        assert_eq!(err.code(), "E_RANGE");
        let err = render_text(&[], None).unwrap_err();
        assert_eq!(err.code(), "E_RANGE");
    }

    #[test]
    fn svg_draws_all_physical_electrodes() {
        let svg = render_svg(&record(&"#".repeat(36)), 0);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 32);
        assert_eq!(svg.matches("fill=\"#1d4ed8\"").count(), 32);
        let dark = render_svg(&record(&".".repeat(36)), 0);
        assert_eq!(dark.matches("fill=\"none\"").count(), 32);
    }
}
