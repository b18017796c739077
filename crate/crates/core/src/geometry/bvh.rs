//! Bounding-volume hierarchy for closest-point queries on triangle soups.
//!
//! Axis-aligned boxes, median split on the longest axis, branch-and-bound
//! traversal. Queries return the globally closest triangle with ties broken
//! towards the smallest triangle index, so results are reproducible no
//! matter how the tree happens to be balanced.

use alloc::vec::Vec;

use super::closest::{closest_point_on_triangle, TriRegion};
use crate::math::Vec3;

#[derive(Debug, Clone, Copy)]
pub struct Aabb {
    pub lo: Vec3,
    pub hi: Vec3,
}

impl Aabb {
    pub fn empty() -> Aabb {
        Aabb {
            lo: Vec3::new(f64::MAX, f64::MAX, f64::MAX),
            hi: Vec3::new(f64::MIN, f64::MIN, f64::MIN),
        }
    }

    pub fn grow(&mut self, p: Vec3) {
        self.lo = self.lo.min(p);
        self.hi = self.hi.max(p);
    }

    pub fn merge(&mut self, o: &Aabb) {
        self.lo = self.lo.min(o.lo);
        self.hi = self.hi.max(o.hi);
    }

    /// Squared distance from `p` to the box (zero inside).
    pub fn distance_sq(&self, p: Vec3) -> f64 {
        let dx = (self.lo.x - p.x).max(0.0).max(p.x - self.hi.x);
        let dy = (self.lo.y - p.y).max(0.0).max(p.y - self.hi.y);
        let dz = (self.lo.z - p.z).max(0.0).max(p.z - self.hi.z);
        dx * dx + dy * dy + dz * dz
    }

    pub fn longest_axis(&self) -> usize {
        let d = self.hi - self.lo;
        if d.x >= d.y && d.x >= d.z {
            0
        } else if d.y >= d.z {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: u32, count: u32, bounds: Aabb },
    Inner { left: u32, right: u32, bounds: Aabb },
}

/// Result of a closest-point query.
#[derive(Debug, Clone, Copy)]
pub struct ClosestHit {
    /// Index of the winning triangle in the original mesh.
    pub triangle: u32,
    /// Closest surface point.
    pub point: Vec3,
    /// Squared distance from the query to `point`.
    pub distance_sq: f64,
    /// Triangle-local simplex containing `point`.
    pub region: TriRegion,
}

#[derive(Debug, Clone)]
pub struct Bvh {
    nodes: Vec<Node>,
    /// Permutation of triangle indices, grouped by leaf.
    order: Vec<u32>,
    /// Triangle corner positions in `order`, flattened.
    triangles: Vec<[Vec3; 3]>,
    root: u32,
    depth: usize,
}

const LEAF_SIZE: usize = 4;

impl Bvh {
    /// Build over `triangles[i]` for the indices in `include`.
    pub fn build(points: &[[Vec3; 3]], include: &[u32]) -> Bvh {
        assert!(!include.is_empty(), "BVH needs at least one triangle");
        let mut order: Vec<u32> = include.to_vec();
        // Centroids indexed by original triangle id.
        let centroids: Vec<Vec3> = points
            .iter()
            .map(|t| (t[0] + t[1] + t[2]) / 3.0)
            .collect();
        let mut nodes = Vec::new();
        let mut depth = 0usize;
        let root = build_node(points, &centroids, &mut order, 0, include.len(), &mut nodes, 1, &mut depth);
        let triangles = order.iter().map(|&i| points[i as usize]).collect();
        Bvh { nodes, order, triangles, root, depth }
    }

    /// Height of the tree (a single leaf has depth 1).
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Globally closest triangle point to `p`. Ties on distance resolve to
    /// the smallest triangle index.
    pub fn closest_point(&self, p: Vec3) -> ClosestHit {
        let mut best = ClosestHit {
            triangle: u32::MAX,
            point: Vec3::ZERO,
            distance_sq: f64::MAX,
            region: TriRegion::Interior,
        };
        self.visit(self.root, p, &mut best);
        best
    }

    fn visit(&self, node: u32, p: Vec3, best: &mut ClosestHit) {
        match &self.nodes[node as usize] {
            Node::Leaf { start, count, .. } => {
                for i in *start..(*start + *count) {
                    let tri = self.triangles[i as usize];
                    let idx = self.order[i as usize];
                    let (q, region) = closest_point_on_triangle(p, tri[0], tri[1], tri[2]);
                    let d = (p - q).norm_sq();
                    if d < best.distance_sq
                        || (d == best.distance_sq && idx < best.triangle)
                    {
                        *best = ClosestHit { triangle: idx, point: q, distance_sq: d, region };
                    }
                }
            }
            Node::Inner { left, right, .. } => {
                let dl = self.node_bounds(*left).distance_sq(p);
                let dr = self.node_bounds(*right).distance_sq(p);
                let (first, second, d_first, d_second) = if dl <= dr {
                    (*left, *right, dl, dr)
                } else {
                    (*right, *left, dr, dl)
                };
                if d_first <= best.distance_sq {
                    self.visit(first, p, best);
                }
                if d_second <= best.distance_sq {
                    self.visit(second, p, best);
                }
            }
        }
    }

    fn node_bounds(&self, node: u32) -> &Aabb {
        match &self.nodes[node as usize] {
            Node::Leaf { bounds, .. } => bounds,
            Node::Inner { bounds, .. } => bounds,
        }
    }
}

fn bounds_of(points: &[[Vec3; 3]], order: &[u32], start: usize, end: usize) -> Aabb {
    let mut b = Aabb::empty();
    for &i in &order[start..end] {
        for p in points[i as usize] {
            b.grow(p);
        }
    }
    b
}

#[allow(clippy::too_many_arguments)]
fn build_node(
    points: &[[Vec3; 3]],
    centroids: &[Vec3],
    order: &mut [u32],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node>,
    level: usize,
    depth: &mut usize,
) -> u32 {
    *depth = (*depth).max(level);
    let bounds = bounds_of(points, order, start, end);
    if end - start <= LEAF_SIZE {
        nodes.push(Node::Leaf {
            start: start as u32,
            count: (end - start) as u32,
            bounds,
        });
        return (nodes.len() - 1) as u32;
    }

    let axis = bounds.longest_axis();
    let key = |c: Vec3| match axis {
        0 => c.x,
        1 => c.y,
        _ => c.z,
    };
    let mid = (start + end) / 2;
    order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
        key(centroids[a as usize])
            .total_cmp(&key(centroids[b as usize]))
            .then(a.cmp(&b))
    });

    let left = build_node(points, centroids, order, start, mid, nodes, level + 1, depth);
    let right = build_node(points, centroids, order, mid, end, nodes, level + 1, depth);
    nodes.push(Node::Inner { left, right, bounds });
    (nodes.len() - 1) as u32
}
