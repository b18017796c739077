//! Minimal 3D vector math used throughout the engine.
//!
//! All lengths are in millimetres and all angles in degrees unless a name
//! says otherwise. Float functions are routed through `libm` so the crate
//! behaves identically with or without the standard library.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}


pub(crate) fn fabs(x: f64) -> f64 {
    libm::fabs(x)
}

pub const DEG_PER_RAD: f64 = 180.0 / core::f64::consts::PI;

/// Guard added before `floor` when converting a continuously accumulated
/// phase into a discrete count. Accumulating `v * dt` across many ticks can
/// land a hair below an exact integer (e.g. 9.999999999999996 instead of
/// 10.0); the guard absorbs that drift without affecting genuine fractional
/// phases, which sit far more than 1e-9 away from the next integer.
pub const PHASE_FLOOR_GUARD: f64 = 1e-9;

/// Floor of an accumulated phase value, robust to float drift from
/// summing many small increments. See [`PHASE_FLOOR_GUARD`].
pub fn phase_floor(phase: f64) -> u32 {
    let f = floor(phase + PHASE_FLOOR_GUARD);
    if f <= 0.0 {
        0
    } else {
        f as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sq())
    }

    /// Unit vector in the same direction, or `None` for (near-)zero input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-12 {
            None
        } else {
            Some(self / n)
        }
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Component-wise minimum.
    pub fn min(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: if self.x < o.x { self.x } else { o.x },
            y: if self.y < o.y { self.y } else { o.y },
            z: if self.z < o.z { self.z } else { o.z },
        }
    }

    /// Component-wise maximum.
    pub fn max(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: if self.x > o.x { self.x } else { o.x },
            y: if self.y > o.y { self.y } else { o.y },
            z: if self.z > o.z { self.z } else { o.z },
        }
    }

    /// Projection onto the horizontal plane: the z component is dropped.
    pub fn flattened(self) -> Vec3 {
        Vec3 { x: self.x, y: self.y, z: 0.0 }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Right-handed orthonormal frame attached to the finger pad.
///
/// `forward` points from the pad centre towards the fingertip, `normal`
/// points out of the pad towards the touched surface, and
/// `right = normal x forward` completes the frame. Looking along the
/// normal (through the finger at the surface) with `forward` up,
/// `right` is to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    pub right: Vec3,
    pub forward: Vec3,
    pub normal: Vec3,
}

impl Basis {
    /// Build the frame from the two stored pad axes.
    pub fn from_pad_axes(normal: Vec3, forward: Vec3) -> Basis {
        Basis { right: normal.cross(forward), forward, normal }
    }

    /// Canonical world-aligned pose: pad facing down (-z), pointing +y.
    /// `right` comes out as +x.
    pub fn canonical() -> Basis {
        Basis::from_pad_axes(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 1.0, 0.0))
    }

    /// Largest deviation from orthonormality across the frame's axes.
    pub fn orthonormality_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for v in [self.right, self.forward, self.normal] {
            e = e.max(fabs(v.norm() - 1.0));
        }
        e = e.max(fabs(self.right.dot(self.forward)));
        e = e.max(fabs(self.forward.dot(self.normal)));
        e = e.max(fabs(self.normal.dot(self.right)));
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn canonical_basis_is_orthonormal_with_right_along_x() {
        let b = Basis::canonical();
        assert!(b.orthonormality_error() < 1e-12);
        assert_eq!(b.right, Vec3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn phase_floor_absorbs_accumulation_drift() {
        assert_eq!(phase_floor(9.999999999999996), 10);
        assert_eq!(phase_floor(10.0), 10);
        assert_eq!(phase_floor(9.9999), 9);
        assert_eq!(phase_floor(0.0), 0);
        assert_eq!(phase_floor(-0.5), 0);
    }

    #[test]
    fn normalized_rejects_zero_vector() {
        assert!(Vec3::ZERO.normalized().is_none());
        let v = Vec3::new(3.0, 0.0, 4.0).normalized().unwrap();
        assert!(fabs(v.norm() - 1.0) < 1e-12);
    }
}
