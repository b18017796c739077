//! Contact queries against 3D scene geometry.
//!
//! A [`SceneModel`] wraps one or more triangle meshes with per-face surface
//! texture levels and an acceleration index. [`query_contact`] maps a point
//! in space to the closest surface point, an inside/outside signed
//! distance, a local frame (normal + tangent), the tactile feature class
//! at that location, and the texture level of the supporting face.
//!
//! Feature classification is band-based: a contact maps to `Corner` when
//! its closest surface point lies within the feature band of a corner
//! vertex, else to `Edge` within the band of a sharp edge, else to `Face`.
//! Corner beats edge where the bands overlap; among equally distant
//! simplices the lowest index wins.

pub mod bvh;
pub mod closest;
pub mod mesh;

use alloc::vec::Vec;

use crate::math::{acos, atan2, fabs, floor, Basis, Vec3, DEG_PER_RAD};

pub use bvh::{Bvh, ClosestHit};
pub use closest::TriRegion;
pub use mesh::{BuiltMesh, FeatureConfig, MeshBuildError, TriangleMesh};

/// Tactile feature class at a contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Feature {
    Face,
    Edge,
    Corner,
}

impl core::fmt::Display for Feature {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Feature::Face => "Face",
            Feature::Edge => "Edge",
            Feature::Corner => "Corner",
        })
    }
}

/// Orientation bin of an edge projected into the finger-pad plane.
///
/// `H` runs along the pad's right axis, `V` along forward, `D1` along the
/// 45 degree diagonal (right+forward), `D2` along 135 degrees
/// (left+forward). Bins are undirected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrientation {
    H,
    D1,
    V,
    D2,
}

impl EdgeOrientation {
    pub const ALL: [EdgeOrientation; 4] =
        [EdgeOrientation::H, EdgeOrientation::D1, EdgeOrientation::V, EdgeOrientation::D2];

    /// Bin centre in degrees.
    pub fn center_deg(self) -> f64 {
        match self {
            EdgeOrientation::H => 0.0,
            EdgeOrientation::D1 => 45.0,
            EdgeOrientation::V => 90.0,
            EdgeOrientation::D2 => 135.0,
        }
    }
}

impl core::fmt::Display for EdgeOrientation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            EdgeOrientation::H => "H",
            EdgeOrientation::D1 => "D1",
            EdgeOrientation::V => "V",
            EdgeOrientation::D2 => "D2",
        })
    }
}

/// Quantize an undirected in-plane angle (degrees) to an orientation bin.
///
/// Bins are centred at 0/45/90/135 degrees with 22.5 degree half-width;
/// an angle exactly on a boundary rounds towards the lower bin centre
/// (22.5 -> H, 67.5 -> D1, and so on).
pub fn quantize_edge_angle_deg(angle_deg: f64) -> EdgeOrientation {
    // Normalize to [0, 180).
    let mut a = angle_deg % 180.0;
    if a < 0.0 {
        a += 180.0;
    }
    let t = (a + 22.5) / 45.0;
    let f = floor(t);
    let k = if t == f { f - 1.0 } else { f } as i64;
    EdgeOrientation::ALL[(k.rem_euclid(4)) as usize]
}

/// Result of projecting an edge direction into the pad plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeBin {
    pub orientation: EdgeOrientation,
    /// Set when the edge was (near-)parallel to the pad normal and the
    /// orientation defaulted to `H`.
    pub degenerate: bool,
}

/// Project `edge_dir` into the finger-pad plane and quantize its
/// orientation. An edge parallel to the pad normal has no meaningful
/// projection and defaults to `H` with the degenerate flag set.
pub fn quantize_edge_orientation(edge_dir: Vec3, pad: &Basis) -> EdgeBin {
    let in_plane = mesh::reject(edge_dir, pad.normal);
    if in_plane.norm_sq() < 1e-12 {
        return EdgeBin { orientation: EdgeOrientation::H, degenerate: true };
    }
    let angle = atan2(in_plane.dot(pad.forward), in_plane.dot(pad.right)) * DEG_PER_RAD;
    EdgeBin { orientation: quantize_edge_angle_deg(angle), degenerate: false }
}

/// The mesh simplex supporting a closest point, as found by a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimplexKind {
    /// Interior of a triangle.
    FaceInterior,
    /// On a mesh edge with the given dihedral angle in degrees.
    OnEdge { dihedral_deg: f64 },
    /// At a mesh vertex.
    AtVertex { sharp_edges: u32, angle_deficit_deg: f64 },
}

/// Everything [`classify_feature`] needs to know about a closest point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexDescriptor {
    pub kind: SimplexKind,
    /// Distance (mm) from the closest point to the nearest sharp mesh
    /// edge, if the mesh has any.
    pub nearest_sharp_edge_mm: Option<f64>,
    /// Distance (mm) from the closest point to the nearest corner vertex,
    /// if the mesh has any.
    pub nearest_corner_mm: Option<f64>,
}

/// Classify the feature at a closest point.
///
/// Corner wins within the feature band of a corner vertex, edge within the
/// band of a sharp edge, face otherwise. The simplex's own sharpness also
/// counts: a closest point directly on a sharp edge or corner vertex
/// classifies accordingly even without precomputed distance fields.
pub fn classify_feature(descriptor: &SimplexDescriptor, config: &FeatureConfig) -> Feature {
    let corner_here = matches!(
        descriptor.kind,
        SimplexKind::AtVertex { sharp_edges, angle_deficit_deg }
            if sharp_edges >= 3 || angle_deficit_deg >= config.corner_deficit_deg
    );
    if corner_here
        || descriptor
            .nearest_corner_mm
            .is_some_and(|d| d <= config.feature_band_mm)
    {
        return Feature::Corner;
    }

    let edge_here = matches!(
        descriptor.kind,
        SimplexKind::OnEdge { dihedral_deg } if dihedral_deg >= config.sharp_dihedral_deg
    );
    if edge_here
        || descriptor
            .nearest_sharp_edge_mm
            .is_some_and(|d| d <= config.feature_band_mm)
    {
        return Feature::Edge;
    }

    Feature::Face
}

/// Result of a contact query. All lengths in millimetres.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSample {
    /// Closest point on the scene surface.
    pub closest_point: Vec3,
    /// Distance from the query point to `closest_point`, negative when the
    /// query point is inside the solid.
    pub signed_distance: f64,
    /// Outward unit surface normal at the closest point.
    pub surface_normal: Vec3,
    /// Unit tangent at the closest point, perpendicular to the normal.
    /// For edge features this is the edge direction.
    pub surface_tangent: Vec3,
    /// Feature class at the contact.
    pub feature: Feature,
    /// Orientation bin of the supporting edge in the pad frame;
    /// present exactly when `feature` is `Edge`.
    pub edge_orientation_bin: Option<EdgeOrientation>,
    /// Set when the edge orientation projection was degenerate and the
    /// bin defaulted to `H`.
    pub degenerate_projection: bool,
    /// Texture level (0 smooth, 1 rough, 2 rougher) of the closest face.
    pub k_texture: u8,
    /// Index of the closest triangle (global across the scene's meshes).
    pub triangle: u32,
}

/// Errors from [`SceneModel::build`].
#[derive(Debug, Clone, PartialEq)]
pub enum SceneBuildError {
    Mesh(MeshBuildError),
    /// `k_texture` has the wrong length for the mesh.
    TextureLengthMismatch { faces: usize, texture_entries: usize },
    /// A texture level above 2.
    TextureLevelOutOfRange { face: usize, level: u8 },
    /// The scene's bounding box has zero diagonal.
    DegenerateBounds,
}

impl core::fmt::Display for SceneBuildError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SceneBuildError::Mesh(e) => write!(f, "{e}"),
            SceneBuildError::TextureLengthMismatch { faces, texture_entries } => write!(
                f,
                "texture map has {texture_entries} entries for {faces} faces"
            ),
            SceneBuildError::TextureLevelOutOfRange { face, level } => {
                write!(f, "face {face} has texture level {level}, expected 0..=2")
            }
            SceneBuildError::DegenerateBounds => write!(f, "scene bounding box is a single point"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SceneBuildError {}

impl From<MeshBuildError> for SceneBuildError {
    fn from(e: MeshBuildError) -> Self {
        SceneBuildError::Mesh(e)
    }
}

/// A queryable scene: built mesh, per-face texture levels, and the
/// acceleration index.
#[derive(Debug, Clone)]
pub struct SceneModel {
    built: BuiltMesh,
    /// Texture level per face, always the same length as the triangle list.
    k_texture: Vec<u8>,
    bvh: Bvh,
}

impl SceneModel {
    /// Build a scene from a mesh and per-face texture levels.
    ///
    /// `k_texture` may be empty (every face defaults to level 0) or must
    /// carry exactly one level in `0..=2` per triangle.
    pub fn build(
        mesh: TriangleMesh,
        k_texture: Vec<u8>,
        config: FeatureConfig,
    ) -> Result<SceneModel, SceneBuildError> {
        let faces = mesh.triangles.len();
        let k_texture = if k_texture.is_empty() {
            alloc::vec![0u8; faces]
        } else if k_texture.len() != faces {
            return Err(SceneBuildError::TextureLengthMismatch {
                faces,
                texture_entries: k_texture.len(),
            });
        } else {
            k_texture
        };
        if let Some(face) = k_texture.iter().position(|&k| k > 2) {
            return Err(SceneBuildError::TextureLevelOutOfRange { face, level: k_texture[face] });
        }

        let built = BuiltMesh::build(mesh, config)?;
        let (lo, hi) = built.bounds();
        if (hi - lo).norm_sq() <= 0.0 {
            return Err(SceneBuildError::DegenerateBounds);
        }

        let points: Vec<[Vec3; 3]> = (0..built.mesh.triangles.len())
            .map(|t| built.triangle_points(t))
            .collect();
        let include: Vec<u32> = (0..points.len() as u32)
            .filter(|&t| built.face_valid[t as usize])
            .collect();
        let bvh = Bvh::build(&points, &include);

        Ok(SceneModel { built, k_texture, bvh })
    }

    pub fn mesh(&self) -> &BuiltMesh {
        &self.built
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.built.config
    }

    pub fn k_texture(&self) -> &[u8] {
        &self.k_texture
    }

    pub fn index_depth(&self) -> usize {
        self.bvh.depth()
    }

    pub fn triangle_count(&self) -> usize {
        self.built.mesh.triangles.len()
    }

    /// Distance (mm) from `p` to the nearest sharp edge, if any.
    fn nearest_sharp_edge(&self, p: Vec3) -> Option<(f64, u32)> {
        let mut best: Option<(f64, u32)> = None;
        for &e in &self.built.sharp_edges {
            let (a, b) = self.built.edge_points(e as usize);
            let d = mesh::point_segment_distance_sq(p, a, b);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, e));
            }
        }
        best.map(|(d, e)| (crate::math::sqrt(d), e))
    }

    /// Distance (mm) from `p` to the nearest corner vertex, if any.
    fn nearest_corner(&self, p: Vec3) -> Option<(f64, u32)> {
        let mut best: Option<(f64, u32)> = None;
        for &v in &self.built.corner_vertices {
            let d = (p - self.built.mesh.vertices[v as usize]).norm_sq();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
            }
        }
        best.map(|(d, v)| (crate::math::sqrt(d), v))
    }

    /// Pseudo-normal of the simplex supporting a closest point, used for
    /// the inside/outside sign (angle-weighted at vertices).
    fn simplex_pseudo_normal(&self, hit: &ClosestHit) -> Vec3 {
        let t = hit.triangle as usize;
        match hit.region {
            TriRegion::Interior => self.built.face_normals[t],
            TriRegion::Side(side) => {
                let e = self.built.face_edges[t][side as usize] as usize;
                self.built.edges[e].pseudo_normal
            }
            TriRegion::Corner(corner) => {
                let v = self.built.mesh.triangles[t][corner as usize] as usize;
                self.built.vertex_data[v].pseudo_normal
            }
        }
    }

    /// Deterministic unit tangent at the closest point, perpendicular to
    /// `normal`: the first triangle side (of the lowest-index usable
    /// triangle) whose rejection from the normal is non-degenerate.
    fn surface_tangent(&self, triangle: u32, normal: Vec3) -> Vec3 {
        let pts = self.built.triangle_points(triangle as usize);
        for side in 0..3 {
            let dir = pts[(side + 1) % 3] - pts[side];
            if let Some(t) = mesh::reject(dir, normal).normalized() {
                return t;
            }
        }
        // Normal-degenerate fallback: any axis not parallel to the normal.
        let axis = if fabs(normal.x) < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        mesh::reject(axis, normal).normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0))
    }
}

/// Map a point in space to its contact information.
///
/// Pure: identical inputs produce identical outputs, and ties between
/// equally close triangles resolve to the smallest triangle index. `pad`
/// orients the edge bin; pass [`Basis::canonical`] when no finger pose is
/// in play.
pub fn query_contact(scene: &SceneModel, p: Vec3, pad: &Basis) -> ContactSample {
    let hit = scene.bvh.closest_point(p);
    let cp = hit.point;

    let pseudo = scene.simplex_pseudo_normal(&hit);
    let offset = p - cp;
    let distance = offset.norm();
    let sign = if offset.dot(pseudo) >= 0.0 { 1.0 } else { -1.0 };

    let surface_normal = pseudo
        .normalized()
        .unwrap_or_else(|| scene.built.face_normals[hit.triangle as usize]);

    let nearest_edge = scene.nearest_sharp_edge(cp);
    let nearest_corner = scene.nearest_corner(cp);

    let kind = match hit.region {
        TriRegion::Interior => SimplexKind::FaceInterior,
        TriRegion::Side(side) => {
            let e = scene.built.face_edges[hit.triangle as usize][side as usize] as usize;
            SimplexKind::OnEdge { dihedral_deg: scene.built.edges[e].dihedral_deg }
        }
        TriRegion::Corner(corner) => {
            let v = scene.built.mesh.triangles[hit.triangle as usize][corner as usize] as usize;
            let data = &scene.built.vertex_data[v];
            SimplexKind::AtVertex {
                sharp_edges: data.sharp_edges,
                angle_deficit_deg: data.angle_deficit_deg,
            }
        }
    };
    let descriptor = SimplexDescriptor {
        kind,
        nearest_sharp_edge_mm: nearest_edge.map(|(d, _)| d),
        nearest_corner_mm: nearest_corner.map(|(d, _)| d),
    };
    let feature = classify_feature(&descriptor, scene.config());

    // The tangent follows the feature: edge direction for edges, a corner
    // vertex's first incident-triangle side for corners, the supporting
    // triangle's first side for faces. Always orthogonal to the normal.
    let (surface_tangent, edge_bin) = match feature {
        Feature::Edge => {
            let e = nearest_edge.map(|(_, e)| e).unwrap_or(0) as usize;
            let (a, b) = scene.built.edge_points(e);
            let tangent = mesh::reject(b - a, surface_normal)
                .normalized()
                .unwrap_or_else(|| scene.surface_tangent(hit.triangle, surface_normal));
            let bin = quantize_edge_orientation(tangent, pad);
            (tangent, Some(bin))
        }
        Feature::Corner => {
            let tangent = nearest_corner
                .and_then(|(_, v)| scene.built.vertex_data[v as usize].any_face)
                .map(|t| scene.surface_tangent(t, surface_normal))
                .unwrap_or_else(|| scene.surface_tangent(hit.triangle, surface_normal));
            (tangent, None)
        }
        Feature::Face => (scene.surface_tangent(hit.triangle, surface_normal), None),
    };

    ContactSample {
        closest_point: cp,
        signed_distance: sign * distance,
        surface_normal,
        surface_tangent,
        feature,
        edge_orientation_bin: edge_bin.map(|b| b.orientation),
        degenerate_projection: edge_bin.is_some_and(|b| b.degenerate),
        k_texture: scene.k_texture[hit.triangle as usize],
        triangle: hit.triangle,
    }
}

/// Angle in degrees between two unit vectors.
pub fn angle_between_deg(a: Vec3, b: Vec3) -> f64 {
    acos(a.dot(b).clamp(-1.0, 1.0)) * DEG_PER_RAD
}
