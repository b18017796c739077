//! Scene loading and validation.
//!
//! [`inspect_scene`] loads an OBJ file (plus an optional material map),
//! builds the queryable scene model, and produces a line-oriented
//! validation report. [`load_scene`] is the strict variant used by the
//! replay pipeline: it fails on any report line marked FAIL.

use std::fmt::Write as _;
use std::path::Path;

use tactile_core::geometry::{FeatureConfig, SceneModel};

use crate::error::{Result, SimError};
use crate::formats::obj::{load_obj, load_texture_sidecar};

/// Severity of one validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Pass,
    Warn,
    Fail,
}

impl core::fmt::Display for Severity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Severity::Pass => "PASS",
            Severity::Warn => "WARN",
            Severity::Fail => "FAIL",
        })
    }
}

/// One line of a validation report.
#[derive(Debug, Clone)]
pub struct ValidationLine {
    pub severity: Severity,
    pub label: &'static str,
    pub detail: String,
}

/// Collected validation findings for a scene.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub lines: Vec<ValidationLine>,
}

impl ValidationReport {
    fn push(&mut self, severity: Severity, label: &'static str, detail: String) {
        self.lines.push(ValidationLine { severity, label, detail });
    }

    /// True when no line is a FAIL. Warnings do not block loading.
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.severity != Severity::Fail)
    }

    /// First FAIL detail, if any.
    pub fn first_failure(&self) -> Option<&ValidationLine> {
        self.lines.iter().find(|l| l.severity == Severity::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            let _ = writeln!(out, "{}  {}: {}", line.severity, line.label, line.detail);
        }
        out
    }
}

/// Scene inspection result: the built model (absent when the build
/// failed) plus the full report.
#[derive(Debug)]
pub struct SceneInspection {
    pub scene: Option<SceneModel>,
    pub report: ValidationReport,
}

fn list_capped(ids: &[u32], cap: usize) -> String {
    let shown: Vec<String> = ids.iter().take(cap).map(|i| i.to_string()).collect();
    if ids.len() > cap {
        format!("{}, ... ({} total)", shown.join(", "), ids.len())
    } else {
        shown.join(", ")
    }
}

/// Load and validate a scene without failing on geometry findings.
///
/// IO and parse errors still return `Err`; everything discovered about
/// the geometry itself lands in the report.
pub fn inspect_scene(
    obj_path: &Path,
    materials_path: Option<&Path>,
    config: FeatureConfig,
) -> Result<SceneInspection> {
    let mesh = load_obj(obj_path)?;
    let faces = mesh.triangles.len();
    let mut report = ValidationReport::default();
    report.push(
        Severity::Pass,
        "geometry",
        format!("{} vertices, {} triangles", mesh.vertices.len(), faces),
    );

    let (k_texture, unassigned) = match materials_path {
        Some(path) => {
            let assignment = load_texture_sidecar(path, faces)?;
            (assignment.k_texture, assignment.unassigned)
        }
        None => (Vec::new(), Vec::new()),
    };
    if materials_path.is_none() {
        report.push(Severity::Pass, "texture", format!("no material map; all {faces} faces level 0"));
    } else if unassigned.is_empty() {
        report.push(Severity::Pass, "texture", format!("all {faces} faces assigned"));
    } else {
        report.push(
            Severity::Warn,
            "texture",
            format!(
                "{} of {} faces unassigned, defaulting to level 0: faces {}",
                unassigned.len(),
                faces,
                list_capped(&unassigned, 8)
            ),
        );
    }

    let scene = match SceneModel::build(mesh, k_texture, config) {
        Ok(scene) => scene,
        Err(e) => {
            report.push(Severity::Fail, "build", e.to_string());
            return Ok(SceneInspection { scene: None, report });
        }
    };

    let built = scene.mesh();
    let degenerate = built.degenerate_triangles();
    if degenerate.is_empty() {
        report.push(Severity::Pass, "triangles", "no degenerate triangles".to_string());
    } else {
        report.push(
            Severity::Warn,
            "triangles",
            format!(
                "{} degenerate triangles excluded from queries: {}",
                degenerate.len(),
                list_capped(&degenerate, 8)
            ),
        );
    }

    let violations = built.manifold_violations();
    let boundary: Vec<u32> = built
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.faces.iter().filter(|&&f| built.face_valid[f as usize]).count() == 1)
        .map(|(i, _)| i as u32)
        .collect();
    if violations.is_empty() && boundary.is_empty() {
        report.push(Severity::Pass, "topology", "closed 2-manifold".to_string());
    } else if !violations.is_empty() {
        report.push(
            Severity::Warn,
            "topology",
            format!(
                "{} edges shared by more than two faces (inside/outside may be unreliable): edges {}",
                violations.len(),
                list_capped(&violations, 8)
            ),
        );
    } else {
        report.push(
            Severity::Warn,
            "topology",
            format!(
                "open surface: {} boundary edges (inside/outside sign unreliable near the rim): edges {}",
                boundary.len(),
                list_capped(&boundary, 8)
            ),
        );
    }

    report.push(
        Severity::Pass,
        "features",
        format!(
            "{} sharp edges, {} corner vertices (dihedral >= {:.1} deg, deficit >= {:.1} deg)",
            built.sharp_edges.len(),
            built.corner_vertices.len(),
            built.config.sharp_dihedral_deg,
            built.config.corner_deficit_deg
        ),
    );

    let (lo, hi) = built.bounds();
    report.push(
        Severity::Pass,
        "bounds",
        format!(
            "[{:.3}, {:.3}, {:.3}] .. [{:.3}, {:.3}, {:.3}] mm, index depth {}",
            lo.x, lo.y, lo.z, hi.x, hi.y, hi.z,
            scene.index_depth()
        ),
    );

    Ok(SceneInspection { scene: Some(scene), report })
}

/// Load a scene for replay: like [`inspect_scene`] but any FAIL line
/// becomes an error.
pub fn load_scene(
    obj_path: &Path,
    materials_path: Option<&Path>,
    config: FeatureConfig,
) -> Result<SceneModel> {
    let inspection = inspect_scene(obj_path, materials_path, config)?;
    match (inspection.scene, inspection.report.first_failure()) {
        (Some(scene), None) => Ok(scene),
        (_, Some(line)) => Err(SimError::Validation(format!("{}: {}", line.label, line.detail))),
        (None, None) => Err(SimError::Validation("scene build produced no model".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::obj::{write_obj, write_texture_sidecar};
    use crate::meshgen;

    fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn clean_cube_passes_with_feature_counts() {
        let dir = tempfile::tempdir().unwrap();
        let obj = write_temp(&dir, "cube.obj", &write_obj(&meshgen::cube(200.0), "cube"));
        let inspection = inspect_scene(&obj, None, FeatureConfig::default()).unwrap();
        assert!(inspection.report.passed(), "{}", inspection.report.render());
        assert!(inspection.scene.is_some());
        let rendered = inspection.report.render();
        assert!(rendered.contains("12 sharp edges, 8 corner vertices"), "{rendered}");
        assert!(rendered.contains("closed 2-manifold"));
    }

    #[test]
    fn open_mesh_warns_but_still_loads() {
        let mut mesh = meshgen::cube(10.0);
        mesh.triangles.pop();
        let dir = tempfile::tempdir().unwrap();
        let obj = write_temp(&dir, "open.obj", &write_obj(&mesh, ""));
        let inspection = inspect_scene(&obj, None, FeatureConfig::default()).unwrap();
        assert!(inspection.scene.is_some());
        assert!(inspection.report.passed(), "warnings never block");
        let rendered = inspection.report.render();
        assert!(rendered.contains("WARN  topology"), "{rendered}");
        // The strict loader also accepts warnings.
        assert!(load_scene(&obj, None, FeatureConfig::default()).is_ok());
    }

    #[test]
    fn partial_material_map_warns_and_lists_faces() {
        let dir = tempfile::tempdir().unwrap();
        let obj = write_temp(&dir, "slab.obj", &write_obj(&meshgen::slab(100.0, 100.0, 10.0), ""));
        let materials = write_temp(&dir, "slab.mtlmap", "0-5 1\n");
        let inspection =
            inspect_scene(&obj, Some(&materials), FeatureConfig::default()).unwrap();
        let rendered = inspection.report.render();
        assert!(rendered.contains("WARN  texture"), "{rendered}");
        assert!(rendered.contains("6 of 12 faces unassigned"), "{rendered}");
        let scene = inspection.scene.unwrap();
        assert_eq!(scene.k_texture()[0], 1);
        assert_eq!(scene.k_texture()[11], 0);
    }

    #[test]
    fn full_material_map_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let obj = write_temp(&dir, "slab.obj", &write_obj(&meshgen::slab(100.0, 100.0, 10.0), ""));
        let materials = write_temp(&dir, "slab.mtlmap", &write_texture_sidecar(&[2u8; 12], ""));
        let inspection =
            inspect_scene(&obj, Some(&materials), FeatureConfig::default()).unwrap();
        assert!(inspection.report.passed());
        assert!(inspection.report.render().contains("all 12 faces assigned"));
        assert_eq!(inspection.scene.unwrap().k_texture(), &[2u8; 12]);
    }

    #[test]
    fn degenerate_bounds_fail_and_block_loading() {
        let dir = tempfile::tempdir().unwrap();
        // A single point repeated: zero-size bounding box.
        let obj = write_temp(
            &dir,
            "point.obj",
            "v 0 0 0\nv 0 0 0\nv 0 0 0\nf 1 2 3\n",
        );
        let inspection = inspect_scene(&obj, None, FeatureConfig::default()).unwrap();
        assert!(!inspection.report.passed());
        assert!(inspection.scene.is_none());
        let err = load_scene(&obj, None, FeatureConfig::default()).unwrap_err();
        assert_eq!(err.code(), "E_VALIDATE");
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err =
            inspect_scene(Path::new("/nonexistent/x.obj"), None, FeatureConfig::default())
                .unwrap_err();
        assert_eq!(err.code(), "E_IO");
    }
}
