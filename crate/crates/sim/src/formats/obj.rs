//! Minimal OBJ reader and writer, plus the per-face texture sidecar.
//!
//! Only the triangle subset is accepted: `v x y z` vertices and
//! three-index `f` faces (with optional `/vt/vn` suffixes, which are
//! ignored). Anything that would silently change the geometry — quads,
//! negative indices, short lines — is an error rather than a guess.

use std::fmt::Write as _;
use std::path::Path;

use tactile_core::geometry::TriangleMesh;
use tactile_core::Vec3;

use crate::error::{Result, SimError};

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> SimError {
    SimError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Parse OBJ text into a mesh. `path` is used for error messages only.
pub fn parse_obj(text: &str, path: &Path) -> Result<TriangleMesh> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let keyword = fields.next().unwrap();
        match keyword {
            "v" => {
                let coords: Vec<&str> = fields.collect();
                if coords.len() < 3 {
                    return Err(parse_err(path, line_no, "vertex needs three coordinates"));
                }
                let mut xyz = [0.0f64; 3];
                for (i, c) in coords.iter().take(3).enumerate() {
                    xyz[i] = c.parse::<f64>().map_err(|_| {
                        parse_err(path, line_no, format!("bad coordinate {c:?}"))
                    })?;
                    if !xyz[i].is_finite() {
                        return Err(parse_err(path, line_no, "non-finite coordinate"));
                    }
                }
                vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
            }
            "f" => {
                let refs: Vec<&str> = fields.collect();
                if refs.len() != 3 {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("face has {} vertices, only triangles are supported", refs.len()),
                    ));
                }
                let mut tri = [0u32; 3];
                for (i, r) in refs.iter().enumerate() {
                    let first = r.split('/').next().unwrap_or("");
                    let one_based = first.parse::<i64>().map_err(|_| {
                        parse_err(path, line_no, format!("bad vertex reference {r:?}"))
                    })?;
                    if one_based < 1 {
                        return Err(parse_err(
                            path,
                            line_no,
                            "vertex references must be positive (1-based)",
                        ));
                    }
                    if one_based as usize > vertices.len() {
                        return Err(parse_err(
                            path,
                            line_no,
                            format!("vertex {one_based} referenced before it is defined"),
                        ));
                    }
                    tri[i] = (one_based - 1) as u32;
                }
                triangles.push(tri);
            }
            // Common OBJ furniture that carries no geometry for us.
            "vn" | "vt" | "vp" | "o" | "g" | "s" | "usemtl" | "mtllib" | "l" => {}
            other => {
                return Err(parse_err(path, line_no, format!("unsupported keyword {other:?}")));
            }
        }
    }
    if triangles.is_empty() {
        return Err(SimError::Format {
            path: path.to_path_buf(),
            message: "no faces found".into(),
        });
    }
    Ok(TriangleMesh { vertices, triangles })
}

pub fn load_obj(path: &Path) -> Result<TriangleMesh> {
    let text = crate::error::read_to_string(path)?;
    parse_obj(&text, path)
}

/// Serialize a mesh as OBJ text.
pub fn write_obj(mesh: &TriangleMesh, comment: &str) -> String {
    let mut out = String::new();
    if !comment.is_empty() {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
    }
    for t in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// Per-face texture levels parsed from a sidecar file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextureAssignment {
    /// One level per face.
    pub k_texture: Vec<u8>,
    /// Faces no range ever covered (they default to level 0).
    pub unassigned: Vec<u32>,
}

/// Parse a texture sidecar: one `<start>-<end> <k>` range per line with
/// 0-based inclusive face indices, `#` comments allowed. Later lines
/// override earlier ones; faces left uncovered default to level 0 and
/// are reported.
pub fn parse_texture_sidecar(
    text: &str,
    faces: usize,
    path: &Path,
) -> Result<TextureAssignment> {
    let mut k_texture = vec![0u8; faces];
    let mut covered = vec![false; faces];

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (range, level) = match (fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(l), None) => (r, l),
            _ => return Err(parse_err(path, line_no, "expected `<start>-<end> <level>`")),
        };
        let (start, end) = range
            .split_once('-')
            .ok_or_else(|| parse_err(path, line_no, "range must be `<start>-<end>`"))?;
        let start: usize = start
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad range start {start:?}")))?;
        let end: usize = end
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad range end {end:?}")))?;
        if start > end {
            return Err(parse_err(path, line_no, format!("range {start}-{end} is reversed")));
        }
        if end >= faces {
            return Err(parse_err(
                path,
                line_no,
                format!("range end {end} exceeds the last face index {}", faces - 1),
            ));
        }
        let k: u8 = level
            .parse()
            .map_err(|_| parse_err(path, line_no, format!("bad texture level {level:?}")))?;
        if k > 2 {
            return Err(parse_err(path, line_no, format!("texture level {k} outside 0..=2")));
        }
        for f in start..=end {
            k_texture[f] = k;
            covered[f] = true;
        }
    }

    let unassigned = covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(f, _)| f as u32)
        .collect();
    Ok(TextureAssignment { k_texture, unassigned })
}

pub fn load_texture_sidecar(path: &Path, faces: usize) -> Result<TextureAssignment> {
    let text = crate::error::read_to_string(path)?;
    parse_texture_sidecar(&text, faces, path)
}

/// Serialize texture levels as maximal runs.
pub fn write_texture_sidecar(k_texture: &[u8], comment: &str) -> String {
    let mut out = String::new();
    if !comment.is_empty() {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let mut i = 0usize;
    while i < k_texture.len() {
        let k = k_texture[i];
        let mut j = i;
        while j + 1 < k_texture.len() && k_texture[j + 1] == k {
            j += 1;
        }
        let _ = writeln!(out, "{i}-{j} {k}");
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> std::path::PathBuf {
        std::path::PathBuf::from("test.obj")
    }

    #[test]
    fn parses_vertices_and_faces_with_slash_forms() {
        let text = "# cube corner\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1/4/2 2//3 3/1\n";
        let mesh = parse_obj(text, &p()).unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert_eq!(mesh.triangles, vec![[0, 1, 2], [0, 1, 2]]);
    }

    #[test]
    fn rejects_quads_and_bad_references() {
        let quad = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        assert!(matches!(parse_obj(quad, &p()), Err(SimError::Parse { line: 5, .. })));
        let negative = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -1 2 3\n";
        assert!(parse_obj(negative, &p()).is_err());
        let forward = "v 0 0 0\nf 1 2 3\n";
        assert!(parse_obj(forward, &p()).is_err());
        let unknown = "curve 1 2 3\n";
        assert!(parse_obj(unknown, &p()).is_err());
    }

    #[test]
    fn obj_round_trips() {
        let text = "v 0 0 0\nv 2.5 0 -1\nv 0 1 0\nf 1 2 3\n";
        let mesh = parse_obj(text, &p()).unwrap();
        let written = write_obj(&mesh, "round trip");
        let back = parse_obj(&written, &p()).unwrap();
        assert_eq!(back.vertices, mesh.vertices);
        assert_eq!(back.triangles, mesh.triangles);
    }

    #[test]
    fn texture_ranges_apply_in_order_with_overrides() {
        let text = "0-5 1\n2-3 2 # rough patch\n";
        let t = parse_texture_sidecar(text, 8, &p()).unwrap();
        assert_eq!(t.k_texture, vec![1, 1, 2, 2, 1, 1, 0, 0]);
        assert_eq!(t.unassigned, vec![6, 7]);
    }

    #[test]
    fn texture_ranges_are_validated() {
        assert!(parse_texture_sidecar("0-9 1\n", 8, &p()).is_err()); // end past last face
        assert!(parse_texture_sidecar("5-2 1\n", 8, &p()).is_err()); // reversed
        assert!(parse_texture_sidecar("0-1 7\n", 8, &p()).is_err()); // level out of range
        assert!(parse_texture_sidecar("0-1\n", 8, &p()).is_err()); // missing level
    }

    #[test]
    fn texture_sidecar_round_trips_as_runs() {
        let levels = vec![0, 0, 1, 1, 1, 2, 0, 0];
        let text = write_texture_sidecar(&levels, "");
        assert_eq!(text, "0-1 0\n2-4 1\n5-5 2\n6-7 0\n");
        let back = parse_texture_sidecar(&text, levels.len(), &p()).unwrap();
        assert_eq!(back.k_texture, levels);
        assert!(back.unassigned.is_empty());
    }
}
