//! Classification of contacts against analytic oracles.
//!
//! A cube has closed-form distances to its faces, edges and corners, so
//! every query near its surface can be checked independently of the
//! mesh pipeline. A finely subdivided sphere has no sharp features at
//! all, so everything near it must classify as a face.

use std::collections::BTreeMap;

use tactile_core::geometry::{query_contact, Feature, FeatureConfig, SceneModel, TriangleMesh};
use tactile_core::{Basis, Vec3};

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    /// Uniform in [lo, hi).
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }
}

/// Axis-aligned cube of the given half-extent, centred at the origin,
/// with outward winding.
fn cube(half: f64) -> TriangleMesh {
    let mut vertices = Vec::new();
    for i in 0..8u32 {
        vertices.push(Vec3::new(
            if i & 1 == 0 { -half } else { half },
            if i & 2 == 0 { -half } else { half },
            if i & 4 == 0 { -half } else { half },
        ));
    }
    let triangles = vec![
        [0, 2, 3], [0, 3, 1], // z = -half
        [4, 5, 7], [4, 7, 6], // z = +half
        [0, 4, 6], [0, 6, 2], // x = -half
        [1, 3, 7], [1, 7, 5], // x = +half
        [0, 1, 5], [0, 5, 4], // y = -half
        [2, 6, 7], [2, 7, 3], // y = +half
    ];
    TriangleMesh { vertices, triangles }
}

/// Signed distance from a point to the cube surface, closed form.
fn cube_signed_distance(p: Vec3, half: f64) -> f64 {
    let q = Vec3::new(p.x.abs() - half, p.y.abs() - half, p.z.abs() - half);
    let outside = Vec3::new(q.x.max(0.0), q.y.max(0.0), q.z.max(0.0)).norm();
    let inside = q.x.max(q.y).max(q.z).min(0.0);
    outside + inside
}

fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Closest point on the cube surface: component clamp outside, nearest
/// face projection inside.
fn cube_closest_point(p: Vec3, half: f64) -> Vec3 {
    let clamped = Vec3::new(
        p.x.clamp(-half, half),
        p.y.clamp(-half, half),
        p.z.clamp(-half, half),
    );
    if clamped != p {
        return clamped;
    }
    let gaps = [half - p.x.abs(), half - p.y.abs(), half - p.z.abs()];
    let axis = (0..3).min_by(|&a, &b| gaps[a].total_cmp(&gaps[b])).unwrap();
    let mut q = p;
    match axis {
        0 => q.x = half.copysign(p.x),
        1 => q.y = half.copysign(p.y),
        _ => q.z = half.copysign(p.z),
    }
    q
}

/// Distances from `p` to the nearest cube corner and edge.
fn cube_feature_distances(p: Vec3, half: f64) -> (f64, f64) {
    let mut corner = f64::INFINITY;
    let mut corners = Vec::new();
    for i in 0..8u32 {
        let v = Vec3::new(
            if i & 1 == 0 { -half } else { half },
            if i & 2 == 0 { -half } else { half },
            if i & 4 == 0 { -half } else { half },
        );
        corners.push(v);
        corner = corner.min((p - v).norm());
    }
    let mut edge = f64::INFINITY;
    for a in 0..8usize {
        for b in (a + 1)..8 {
            // Cube edges join corners differing in exactly one axis bit.
            if (a ^ b).count_ones() == 1 {
                edge = edge.min(point_segment_distance(p, corners[a], corners[b]));
            }
        }
    }
    (corner, edge)
}

#[test]
fn cube_contacts_match_the_analytic_feature_bands() {
    let half = 100.0;
    let config = FeatureConfig::default();
    let band = config.feature_band_mm;
    let scene = SceneModel::build(cube(half), Vec::new(), config).unwrap();
    let pad = Basis::canonical();

    let mut rng = XorShift(0x1234_5678_9abc_def1);
    let mut checked = 0u32;
    let margin = 0.05;
    while checked < 10_000 {
        let p = Vec3::new(
            rng.range(-half - 3.0, half + 3.0),
            rng.range(-half - 3.0, half + 3.0),
            rng.range(-half - 3.0, half + 3.0),
        );
        let sd = cube_signed_distance(p, half);
        if sd.abs() > 2.5 {
            continue;
        }
        // Bands are measured on the surface: from the contact point, not
        // from the finger position hovering above it.
        let surface = cube_closest_point(p, half);
        let (d_corner, d_edge) = cube_feature_distances(surface, half);
        // Skip points too close to a band boundary for either pipeline
        // to have a well-defined answer, and interior points near a face
        // diagonal where the nearest face itself is ambiguous.
        if (d_corner - band).abs() < margin || (d_edge - band).abs() < margin {
            continue;
        }
        if sd < 0.0 {
            let gaps = [half - p.x.abs(), half - p.y.abs(), half - p.z.abs()];
            let mut sorted = gaps;
            sorted.sort_by(f64::total_cmp);
            if sorted[1] - sorted[0] < margin {
                continue;
            }
        }
        let expected = if d_corner <= band {
            Feature::Corner
        } else if d_edge <= band {
            Feature::Edge
        } else {
            Feature::Face
        };

        let sample = query_contact(&scene, p, &pad);
        assert_eq!(
            sample.feature, expected,
            "at {p:?}: corner {d_corner:.3} mm, edge {d_edge:.3} mm"
        );
        assert!(
            (sample.signed_distance - sd).abs() < 1e-6,
            "signed distance {} vs analytic {sd} at {p:?}",
            sample.signed_distance
        );
        assert!(
            cube_signed_distance(sample.closest_point, half).abs() < 1e-6,
            "closest point off the surface at {p:?}"
        );
        assert_eq!(sample.feature == Feature::Edge, sample.edge_orientation_bin.is_some());
        checked += 1;
    }
}

#[test]
fn cube_edge_contacts_report_a_tangent_along_the_edge() {
    let half = 100.0;
    let scene = SceneModel::build(cube(half), Vec::new(), FeatureConfig::default()).unwrap();
    let pad = Basis::canonical();
    // Directly above the top edge running along x at y = half, z = half.
    let sample = query_contact(&scene, Vec3::new(12.0, half + 0.4, half + 0.4), &pad);
    assert_eq!(sample.feature, Feature::Edge);
    let along_x = sample.surface_tangent.dot(Vec3::new(1.0, 0.0, 0.0)).abs();
    assert!(along_x > 0.999, "tangent {:?} not along the edge", sample.surface_tangent);
}

/// Sphere built by subdividing an octahedron and projecting to the
/// radius; three rounds leave every dihedral far below the sharp
/// threshold.
fn subdivided_sphere(radius: f64, rounds: u32) -> TriangleMesh {
    let mut vertices = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, -1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(0.0, 0.0, -1.0),
    ];
    let mut triangles: Vec<[u32; 3]> = vec![
        [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
        [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
    ];
    for _ in 0..rounds {
        let mut midpoints: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for t in &triangles {
            let mut mids = [0u32; 3];
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mids[i] = *midpoints.entry(key).or_insert_with(|| {
                    let m = (vertices[a as usize] + vertices[b as usize]) * 0.5;
                    vertices.push(m.normalized().unwrap());
                    (vertices.len() - 1) as u32
                });
            }
            next.push([t[0], mids[0], mids[2]]);
            next.push([mids[0], t[1], mids[1]]);
            next.push([mids[2], mids[1], t[2]]);
            next.push([mids[0], mids[1], mids[2]]);
        }
        triangles = next;
    }
    for v in vertices.iter_mut() {
        *v = *v * radius;
    }
    TriangleMesh { vertices, triangles }
}

#[test]
fn smooth_sphere_classifies_as_face_everywhere() {
    let radius = 80.0;
    let mesh = subdivided_sphere(radius, 3);
    assert_eq!(mesh.triangles.len(), 512);
    let scene = SceneModel::build(mesh, Vec::new(), FeatureConfig::default()).unwrap();
    assert!(scene.mesh().sharp_edges.is_empty(), "sphere grew sharp edges");
    assert!(scene.mesh().corner_vertices.is_empty(), "sphere grew corners");

    let pad = Basis::canonical();
    let mut rng = XorShift(0xfeed_beef_cafe_0001);
    for _ in 0..2_000 {
        // Random direction, then a point just outside or inside the shell.
        let dir = loop {
            let v = Vec3::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
            if v.norm_sq() > 1e-3 && v.norm_sq() <= 1.0 {
                break v.normalized().unwrap();
            }
        };
        let p = dir * rng.range(radius - 2.0, radius + 2.0);
        let sample = query_contact(&scene, p, &pad);
        assert_eq!(sample.feature, Feature::Face, "at {p:?}");
        assert_eq!(sample.edge_orientation_bin, None);
        // The polyhedron lies inside its circumsphere by up to the chord
        // sagitta, so the measured distance can only exceed the
        // spherical one, and only by that much.
        let analytic = p.norm() - radius;
        let excess = sample.signed_distance - analytic;
        assert!(
            (-1e-6..=1.5).contains(&excess),
            "signed distance {} vs spherical {analytic}",
            sample.signed_distance
        );
    }
}

#[test]
fn interior_points_report_negative_distances() {
    let scene = SceneModel::build(cube(100.0), Vec::new(), FeatureConfig::default()).unwrap();
    let pad = Basis::canonical();
    let inside = query_contact(&scene, Vec3::new(30.0, -40.0, 99.0), &pad);
    assert!(inside.signed_distance < 0.0);
    assert!((inside.signed_distance + 1.0).abs() < 1e-9);
    let outside = query_contact(&scene, Vec3::new(30.0, -40.0, 101.0), &pad);
    assert!((outside.signed_distance - 1.0).abs() < 1e-9);
}
