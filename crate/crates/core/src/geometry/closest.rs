//! Closest point on a triangle, with the Voronoi region it falls in.
//!
//! Region tests follow the standard barycentric sign analysis (Ericson,
//! Real-Time Collision Detection, 5.1.5). Knowing whether the closest
//! point lies in the interior, on a side, or at a corner lets the caller
//! pick the right pseudo-normal for inside/outside tests and the right
//! simplex for feature classification.

use crate::math::Vec3;

/// Which simplex of the triangle contains the closest point.
///
/// Indices are triangle-local: vertex `i` is corner `i`; side `i` joins
/// corners `i` and `(i + 1) % 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriRegion {
    Interior,
    Side(u8),
    Corner(u8),
}

/// Closest point to `p` on triangle `(a, b, c)` and its region.
pub fn closest_point_on_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> (Vec3, TriRegion) {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;

    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a, TriRegion::Corner(0));
    }

    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (b, TriRegion::Corner(1));
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return (a + ab * t, TriRegion::Side(0)); // on AB
    }

    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (c, TriRegion::Corner(2));
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return (a + ac * t, TriRegion::Side(2)); // on CA
    }

    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * t, TriRegion::Side(1)); // on BC
    }

    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, TriRegion::Interior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::fabs;

    const A: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    const B: Vec3 = Vec3::new(2.0, 0.0, 0.0);
    const C: Vec3 = Vec3::new(0.0, 2.0, 0.0);

    #[test]
    fn interior_projection() {
        let (q, r) = closest_point_on_triangle(Vec3::new(0.5, 0.5, 3.0), A, B, C);
        assert_eq!(r, TriRegion::Interior);
        assert!(q.distance(Vec3::new(0.5, 0.5, 0.0)) < 1e-12);
    }

    #[test]
    fn side_and_corner_regions() {
        let (q, r) = closest_point_on_triangle(Vec3::new(1.0, -1.0, 0.0), A, B, C);
        assert_eq!(r, TriRegion::Side(0));
        assert!(q.distance(Vec3::new(1.0, 0.0, 0.0)) < 1e-12);

        let (q, r) = closest_point_on_triangle(Vec3::new(-1.0, -1.0, 0.5), A, B, C);
        assert_eq!(r, TriRegion::Corner(0));
        assert!(q.distance(A) < 1e-12);

        let (q, r) = closest_point_on_triangle(Vec3::new(3.0, -0.5, 0.0), A, B, C);
        assert_eq!(r, TriRegion::Corner(1));
        assert!(q.distance(B) < 1e-12);

        // Beyond the hypotenuse.
        let (q, r) = closest_point_on_triangle(Vec3::new(2.0, 2.0, 0.0), A, B, C);
        assert_eq!(r, TriRegion::Side(1));
        assert!(q.distance(Vec3::new(1.0, 1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn matches_dense_sampling_oracle() {
        // Brute-force oracle: minimum distance over a fine barycentric grid
        // must not beat the analytic answer by more than grid resolution.
        let mut rng: u64 = 0x9E3779B97F4A7C15;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let p = Vec3::new(next() * 8.0 - 4.0, next() * 8.0 - 4.0, next() * 8.0 - 4.0);
            let (q, _) = closest_point_on_triangle(p, A, B, C);
            let analytic = p.distance(q);
            let mut best = f64::MAX;
            let n = 60;
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let u = i as f64 / n as f64;
                    let v = j as f64 / n as f64;
                    let s = A + (B - A) * u + (C - A) * v;
                    best = best.min(p.distance(s));
                }
            }
            assert!(analytic <= best + 1e-9, "analytic {analytic} vs sampled {best}");
            assert!(best - analytic < 0.1, "grid check diverged");
        }
        let _ = fabs(0.0);
    }
}
