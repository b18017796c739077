//! Indexed triangle meshes and the per-feature data derived from them.
//!
//! Building a mesh precomputes everything the contact queries need:
//! face normals, edge adjacency with dihedral angles, the set of sharp
//! edges and corner vertices, and angle-weighted vertex normals for
//! signed-distance tests.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math::{acos, fabs, Vec3, DEG_PER_RAD};

/// Raw indexed triangle soup. Positions are in millimetres.
#[derive(Debug, Clone, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

/// Thresholds controlling which mesh simplices count as tactile features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    /// An edge is sharp when the angle between its two face normals is at
    /// least this many degrees. Edges bordering a single face (open mesh
    /// boundaries) are always sharp.
    pub sharp_dihedral_deg: f64,
    /// A vertex with fewer than 3 incident sharp edges still counts as a
    /// corner when its angle deficit (360 degrees minus the sum of incident
    /// triangle angles) reaches this threshold.
    pub corner_deficit_deg: f64,
    /// Half-width of the region around a sharp simplex, in millimetres,
    /// within which a contact maps to that feature.
    pub feature_band_mm: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            sharp_dihedral_deg: 30.0,
            corner_deficit_deg: 45.0,
            feature_band_mm: 2.0,
        }
    }
}

/// An undirected mesh edge with its adjacency information.
#[derive(Debug, Clone)]
pub struct MeshEdge {
    /// Vertex indices, `v[0] < v[1]`.
    pub vertices: [u32; 2],
    /// Indices of adjacent triangles (1 for boundary edges, 2 for interior;
    /// more only in non-manifold input, where the first two are used).
    pub faces: Vec<u32>,
    /// Angle in degrees between the two adjacent face normals
    /// (180 for boundary edges).
    pub dihedral_deg: f64,
    /// Whether this edge qualifies as a sharp tactile feature.
    pub sharp: bool,
    /// Sum of the first two adjacent face normals; its dot with an offset
    /// vector gives the inside/outside sign near this edge.
    pub pseudo_normal: Vec3,
}

/// Per-vertex derived data.
#[derive(Debug, Clone)]
pub struct MeshVertex {
    /// Number of incident sharp edges.
    pub sharp_edges: u32,
    /// 360 degrees minus the sum of incident triangle corner angles.
    pub angle_deficit_deg: f64,
    /// Whether this vertex qualifies as a corner feature.
    pub corner: bool,
    /// Angle-weighted sum of incident face normals.
    pub pseudo_normal: Vec3,
    /// Lowest-index incident triangle, if any.
    pub any_face: Option<u32>,
}

/// Errors from [`BuiltMesh::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshBuildError {
    /// No vertices or no triangles.
    Empty,
    /// A vertex coordinate is NaN or infinite.
    NonFiniteVertex(usize),
    /// A triangle references a vertex that does not exist.
    IndexOutOfRange(usize),
    /// Every triangle has (near-)zero area.
    AllDegenerate,
}

impl core::fmt::Display for MeshBuildError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeshBuildError::Empty => write!(f, "mesh has no vertices or no triangles"),
            MeshBuildError::NonFiniteVertex(i) => write!(f, "vertex {i} has a non-finite coordinate"),
            MeshBuildError::IndexOutOfRange(t) => write!(f, "triangle {t} references a missing vertex"),
            MeshBuildError::AllDegenerate => write!(f, "all triangles are degenerate"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MeshBuildError {}

/// Area below which a triangle is treated as degenerate and excluded
/// from queries (square millimetres).
pub const DEGENERATE_AREA_SQ_MM: f64 = 1e-12;

/// A [`TriangleMesh`] plus everything derived from it.
#[derive(Debug, Clone)]
pub struct BuiltMesh {
    pub mesh: TriangleMesh,
    pub config: FeatureConfig,
    /// Unit face normals (zero vector for degenerate triangles).
    pub face_normals: Vec<Vec3>,
    /// True for triangles with enough area to participate in queries.
    pub face_valid: Vec<bool>,
    pub edges: Vec<MeshEdge>,
    /// For each triangle, the edge ids of its three sides
    /// (side i connects corner i and corner (i+1) % 3).
    pub face_edges: Vec<[u32; 3]>,
    pub vertex_data: Vec<MeshVertex>,
    /// Ids of sharp edges, ascending.
    pub sharp_edges: Vec<u32>,
    /// Ids of corner vertices, ascending.
    pub corner_vertices: Vec<u32>,
}

impl BuiltMesh {
    pub fn build(mesh: TriangleMesh, config: FeatureConfig) -> Result<BuiltMesh, MeshBuildError> {
        if mesh.vertices.is_empty() || mesh.triangles.is_empty() {
            return Err(MeshBuildError::Empty);
        }
        for (i, v) in mesh.vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(MeshBuildError::NonFiniteVertex(i));
            }
        }
        let nv = mesh.vertices.len() as u32;
        for (t, tri) in mesh.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= nv) {
                return Err(MeshBuildError::IndexOutOfRange(t));
            }
        }

        let mut face_normals = Vec::with_capacity(mesh.triangles.len());
        let mut face_valid = Vec::with_capacity(mesh.triangles.len());
        let mut any_valid = false;
        for tri in &mesh.triangles {
            let [a, b, c] = tri.map(|i| mesh.vertices[i as usize]);
            let n = (b - a).cross(c - a);
            let area_sq = n.norm_sq() * 0.25;
            if area_sq > DEGENERATE_AREA_SQ_MM {
                face_normals.push(n.normalized().unwrap_or(Vec3::ZERO));
                face_valid.push(true);
                any_valid = true;
            } else {
                face_normals.push(Vec3::ZERO);
                face_valid.push(false);
            }
        }
        if !any_valid {
            return Err(MeshBuildError::AllDegenerate);
        }

        // Edge adjacency, keyed by sorted vertex pair. BTreeMap keeps the
        // derived edge ids independent of triangle order hashing.
        let mut edge_map: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut edges: Vec<MeshEdge> = Vec::new();
        let mut face_edges: Vec<[u32; 3]> = Vec::with_capacity(mesh.triangles.len());
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let mut ids = [0u32; 3];
            for side in 0..3 {
                let a = tri[side];
                let b = tri[(side + 1) % 3];
                let key = if a < b { (a, b) } else { (b, a) };
                let id = *edge_map.entry(key).or_insert_with(|| {
                    edges.push(MeshEdge {
                        vertices: [key.0, key.1],
                        faces: Vec::new(),
                        dihedral_deg: 0.0,
                        sharp: false,
                        pseudo_normal: Vec3::ZERO,
                    });
                    (edges.len() - 1) as u32
                });
                edges[id as usize].faces.push(t as u32);
                ids[side] = id;
            }
            face_edges.push(ids);
        }

        for edge in &mut edges {
            let valid_faces: Vec<u32> = edge
                .faces
                .iter()
                .copied()
                .filter(|&f| face_valid[f as usize])
                .collect();
            match valid_faces.len() {
                0 => {
                    edge.dihedral_deg = 0.0;
                    edge.sharp = false;
                    edge.pseudo_normal = Vec3::ZERO;
                }
                1 => {
                    // Open boundary: maximally sharp.
                    edge.dihedral_deg = 180.0;
                    edge.sharp = true;
                    edge.pseudo_normal = face_normals[valid_faces[0] as usize];
                }
                _ => {
                    let n0 = face_normals[valid_faces[0] as usize];
                    let n1 = face_normals[valid_faces[1] as usize];
                    let d = n0.dot(n1).clamp(-1.0, 1.0);
                    edge.dihedral_deg = acos(d) * DEG_PER_RAD;
                    edge.sharp = edge.dihedral_deg >= config.sharp_dihedral_deg;
                    edge.pseudo_normal = n0 + n1;
                }
            }
        }

        let mut vertex_data: Vec<MeshVertex> = (0..mesh.vertices.len())
            .map(|_| MeshVertex {
                sharp_edges: 0,
                angle_deficit_deg: 360.0,
                corner: false,
                pseudo_normal: Vec3::ZERO,
                any_face: None,
            })
            .collect();

        for (t, tri) in mesh.triangles.iter().enumerate() {
            if !face_valid[t] {
                continue;
            }
            let pts = tri.map(|i| mesh.vertices[i as usize]);
            for corner in 0..3 {
                let v = tri[corner] as usize;
                let e0 = (pts[(corner + 1) % 3] - pts[corner]).normalized();
                let e1 = (pts[(corner + 2) % 3] - pts[corner]).normalized();
                let angle = match (e0, e1) {
                    (Some(a), Some(b)) => acos(a.dot(b).clamp(-1.0, 1.0)),
                    _ => 0.0,
                };
                let data = &mut vertex_data[v];
                data.angle_deficit_deg -= angle * DEG_PER_RAD;
                data.pseudo_normal += face_normals[t] * angle;
                if data.any_face.is_none() {
                    data.any_face = Some(t as u32);
                }
            }
        }

        for edge in &edges {
            if edge.sharp {
                vertex_data[edge.vertices[0] as usize].sharp_edges += 1;
                vertex_data[edge.vertices[1] as usize].sharp_edges += 1;
            }
        }
        for data in &mut vertex_data {
            if data.any_face.is_none() {
                // Unreferenced vertex: no deficit, never a corner.
                data.angle_deficit_deg = 0.0;
                continue;
            }
            data.corner = data.sharp_edges >= 3 || data.angle_deficit_deg >= config.corner_deficit_deg;
        }

        let sharp_edges = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.sharp)
            .map(|(i, _)| i as u32)
            .collect();
        let corner_vertices = vertex_data
            .iter()
            .enumerate()
            .filter(|(_, v)| v.corner)
            .map(|(i, _)| i as u32)
            .collect();

        Ok(BuiltMesh {
            mesh,
            config,
            face_normals,
            face_valid,
            edges,
            face_edges,
            vertex_data,
            sharp_edges,
            corner_vertices,
        })
    }

    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        self.mesh.triangles[t].map(|i| self.mesh.vertices[i as usize])
    }

    pub fn edge_points(&self, e: usize) -> (Vec3, Vec3) {
        let [a, b] = self.edges[e].vertices;
        (self.mesh.vertices[a as usize], self.mesh.vertices[b as usize])
    }

    /// Axis-aligned bounds over all vertices.
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = self.mesh.vertices[0];
        let mut hi = lo;
        for &v in &self.mesh.vertices {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Edges adjacent to more than two valid faces (non-manifold input).
    pub fn manifold_violations(&self) -> Vec<u32> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                e.faces.iter().filter(|&&f| self.face_valid[f as usize]).count() > 2
            })
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Indices of degenerate (near-zero-area) triangles.
    pub fn degenerate_triangles(&self) -> Vec<u32> {
        self.face_valid
            .iter()
            .enumerate()
            .filter(|(_, &v)| !v)
            .map(|(i, _)| i as u32)
            .collect()
    }
}

/// Squared distance from `p` to the segment `(a, b)`.
pub fn point_segment_distance_sq(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sq();
    if denom < 1e-24 {
        return (p - a).norm_sq();
    }
    let t = ((p - a).dot(ab) / denom).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm_sq()
}

/// `v` with its component along unit vector `n` removed.
pub fn reject(v: Vec3, n: Vec3) -> Vec3 {
    v - n * v.dot(n)
}

/// Absolute angle difference helper used by dihedral tests.
pub fn angle_close(a: f64, b: f64, tol: f64) -> bool {
    fabs(a - b) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_cube() -> TriangleMesh {
        // 8 vertices, 12 triangles, outward winding.
        let vertices = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 1.0),
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(0.0, 1.0, 1.0),
        ];
        let triangles = vec![
            [0, 2, 1],
            [0, 3, 2], // bottom (z=0, normal -z)
            [4, 5, 6],
            [4, 6, 7], // top (z=1, normal +z)
            [0, 1, 5],
            [0, 5, 4], // front (y=0)
            [2, 3, 7],
            [2, 7, 6], // back (y=1)
            [1, 2, 6],
            [1, 6, 5], // right (x=1)
            [3, 0, 4],
            [3, 4, 7], // left (x=0)
        ];
        TriangleMesh { vertices, triangles }
    }

    #[test]
    fn cube_has_sharp_silhouette_edges_and_8_corners() {
        let built = BuiltMesh::build(unit_cube(), FeatureConfig::default()).unwrap();
        // 12 cube edges at 90 degrees + 6 face diagonals at 0 degrees.
        assert_eq!(built.edges.len(), 18);
        assert_eq!(built.sharp_edges.len(), 12);
        for &e in &built.sharp_edges {
            assert!(angle_close(built.edges[e as usize].dihedral_deg, 90.0, 1e-9));
        }
        assert_eq!(built.corner_vertices.len(), 8);
        for v in &built.vertex_data {
            assert_eq!(v.sharp_edges, 3);
            // Cube corner: three right angles leave a 90 degree deficit.
            assert!(angle_close(v.angle_deficit_deg, 90.0, 1e-9));
        }
    }

    #[test]
    fn flat_quad_diagonal_is_not_sharp() {
        let mesh = TriangleMesh {
            vertices: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            triangles: vec![[0, 1, 2], [0, 2, 3]],
        };
        let built = BuiltMesh::build(mesh, FeatureConfig::default()).unwrap();
        let diagonal = built
            .edges
            .iter()
            .find(|e| e.faces.len() == 2)
            .expect("shared diagonal");
        assert!(angle_close(diagonal.dihedral_deg, 0.0, 1e-9));
        assert!(!diagonal.sharp);
        // The four outer boundary edges are open and therefore sharp.
        assert_eq!(built.sharp_edges.len(), 4);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            BuiltMesh::build(TriangleMesh::default(), FeatureConfig::default()),
            Err(MeshBuildError::Empty)
        ));
        let nan = TriangleMesh {
            vertices: vec![Vec3::new(f64::NAN, 0.0, 0.0)],
            triangles: vec![[0, 0, 0]],
        };
        assert!(matches!(
            BuiltMesh::build(nan, FeatureConfig::default()),
            Err(MeshBuildError::NonFiniteVertex(0))
        ));
        let degenerate = TriangleMesh {
            vertices: vec![Vec3::ZERO, Vec3::ZERO, Vec3::ZERO],
            triangles: vec![[0, 1, 2]],
        };
        assert!(matches!(
            BuiltMesh::build(degenerate, FeatureConfig::default()),
            Err(MeshBuildError::AllDegenerate)
        ));
    }

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(2.0, 0.0, 0.0);
        assert!(fabs(point_segment_distance_sq(Vec3::new(1.0, 1.0, 0.0), a, b) - 1.0) < 1e-12);
        assert!(fabs(point_segment_distance_sq(Vec3::new(-3.0, 4.0, 0.0), a, b) - 25.0) < 1e-12);
    }
}
