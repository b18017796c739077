//! Built-in scene geometry: boxes, spheres, a spike, and a large bumpy
//! blob for stress runs. All meshes are closed, outward-wound triangle
//! lists in millimetres.

use std::collections::BTreeMap;

use tactile_core::geometry::TriangleMesh;
use tactile_core::Vec3;

/// Axis-aligned box between two corners, 12 outward-wound triangles.
pub fn box_mesh(min: Vec3, max: Vec3) -> TriangleMesh {
    let mut vertices = Vec::with_capacity(8);
    for i in 0..8u32 {
        vertices.push(Vec3::new(
            if i & 1 == 0 { min.x } else { max.x },
            if i & 2 == 0 { min.y } else { max.y },
            if i & 4 == 0 { min.z } else { max.z },
        ));
    }
    let triangles = vec![
        [0, 2, 3], [0, 3, 1], // z = min
        [4, 5, 7], [4, 7, 6], // z = max
        [0, 4, 6], [0, 6, 2], // x = min
        [1, 3, 7], [1, 7, 5], // x = max
        [0, 1, 5], [0, 5, 4], // y = min
        [2, 6, 7], [2, 7, 3], // y = max
    ];
    TriangleMesh { vertices, triangles }
}

/// Cube of the given edge length centred at the origin.
pub fn cube(size_mm: f64) -> TriangleMesh {
    let h = size_mm / 2.0;
    box_mesh(Vec3::new(-h, -h, -h), Vec3::new(h, h, h))
}

/// Flat slab whose top surface is the z = 0 plane — a tabletop for
/// slide runs. Extends `width x depth` around the origin and
/// `thickness` downward.
pub fn slab(width_mm: f64, depth_mm: f64, thickness_mm: f64) -> TriangleMesh {
    box_mesh(
        Vec3::new(-width_mm / 2.0, -depth_mm / 2.0, -thickness_mm),
        Vec3::new(width_mm / 2.0, depth_mm / 2.0, 0.0),
    )
}

/// Four-sided pyramid with its apex at the origin pointing up (+z) and
/// a square base `height` below — a strongly-pointed corner feature
/// reachable from every lateral direction.
pub fn spike(height_mm: f64, base_half_mm: f64) -> TriangleMesh {
    let (h, b) = (height_mm, base_half_mm);
    let vertices = vec![
        Vec3::new(0.0, 0.0, 0.0),   // apex
        Vec3::new(-b, -b, -h),
        Vec3::new(b, -b, -h),
        Vec3::new(b, b, -h),
        Vec3::new(-b, b, -h),
    ];
    let triangles = vec![
        [0, 1, 2], // south side (outward -y)
        [0, 2, 3], // east side
        [0, 3, 4], // north side
        [0, 4, 1], // west side
        [1, 4, 3], // base
        [1, 3, 2],
    ];
    TriangleMesh { vertices, triangles }
}

/// Icosahedron subdivided `subdivisions` times with vertices projected
/// to the radius: 20 * 4^n faces.
pub fn icosphere(radius_mm: f64, subdivisions: u32) -> TriangleMesh {
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, t, 0.0), (1.0, t, 0.0), (-1.0, -t, 0.0), (1.0, -t, 0.0),
        (0.0, -1.0, t), (0.0, 1.0, t), (0.0, -1.0, -t), (0.0, 1.0, -t),
        (t, 0.0, -1.0), (t, 0.0, 1.0), (-t, 0.0, -1.0), (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalized().unwrap())
    .collect();
    let mut triangles: Vec<[u32; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let mut mids = [0u32; 3];
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mids[i] = *midpoints.entry(key).or_insert_with(|| {
                    let m = (vertices[a as usize] + vertices[b as usize]) * 0.5;
                    vertices.push(m.normalized().unwrap());
                    (vertices.len() - 1) as u32
                });
            }
            next.push([tri[0], mids[0], mids[2]]);
            next.push([mids[0], tri[1], mids[1]]);
            next.push([mids[2], mids[1], tri[2]]);
            next.push([mids[0], mids[1], mids[2]]);
        }
        triangles = next;
    }

    for v in vertices.iter_mut() {
        *v = *v * radius_mm;
    }
    TriangleMesh { vertices, triangles }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Icosphere with a smooth radial undulation — organic-looking, heavy,
/// and still free of sharp features at reasonable amplitudes. The seed
/// only shifts the undulation phases, so the same seed always produces
/// the same mesh.
pub fn blob(radius_mm: f64, subdivisions: u32, seed: u64, relative_amplitude: f64) -> TriangleMesh {
    let mut mesh = icosphere(radius_mm, subdivisions);
    let mut state = seed;
    let phases: Vec<f64> = (0..6)
        .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 * core::f64::consts::TAU)
        .collect();
    for v in mesh.vertices.iter_mut() {
        let d = v.normalized().unwrap();
        let field = (3.0 * d.x + phases[0]).sin() * (2.0 * d.y + phases[1]).cos()
            + 0.5 * (5.0 * d.z + phases[2]).sin() * (3.0 * d.x + phases[3]).cos()
            + 0.25 * (7.0 * d.y + phases[4]).sin() * (5.0 * d.z + phases[5]).cos();
        let r = radius_mm * (1.0 + relative_amplitude * field / 1.75);
        *v = d * r;
    }
    mesh
}
