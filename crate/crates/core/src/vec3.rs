//! Minimal 3-vector arithmetic.
//!
//! Everything in this crate lives in correlation space or on the Bloch
//! sphere, so a by-value `f64` triple with dot, cross, and norm covers all
//! linear algebra needs outside the 4x4 operator oracle.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * rhs.z - self.z * rhs.y,
            y: self.z * rhs.x - self.x * rhs.z,
            z: self.x * rhs.y - self.y * rhs.x,
        }
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest absolute component difference, the natural metric for
    /// componentwise tolerance checks.
    pub fn max_abs_diff(self, rhs: Vec3) -> f64 {
        (self.x - rhs.x)
            .abs()
            .max((self.y - rhs.y).abs())
            .max((self.z - rhs.z).abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal_and_right_handed() {
        let c = Vec3::X.cross(Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(c, Vec3::Z);
        let u = Vec3::new(0.3, -0.2, 0.9);
        let v = Vec3::new(-1.1, 0.4, 0.2);
        let w = u.cross(v);
        assert!(w.dot(u).abs() < 1e-15);
        assert!(w.dot(v).abs() < 1e-15);
    }

    #[test]
    fn norm_and_scaling() {
        let v = Vec3::new(3.0, 0.0, 4.0);
        assert_eq!(v.norm(), 5.0);
        assert_eq!((v * 2.0).norm(), 10.0);
        assert_eq!((2.0 * v).x, 6.0);
        assert_eq!((-v).z, -4.0);
    }
}
