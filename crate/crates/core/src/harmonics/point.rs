use crate::error::{Error, Result};

/// Tolerance on `|x|² - 1` for a point to count as lying on the sphere.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Points closer than this to `z = ±1` are treated as poles by the gradient.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// A point of the unit sphere in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SphericalPoint {
    /// Builds a point, rejecting anything farther than [`UNIT_TOLERANCE`] from the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        p.check_unit()?;
        Ok(p)
    }

    /// Builds a point without validation. Callers guarantee unit length.
    pub const fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Point with polar angle `theta` (from +z) and longitude `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new_unchecked(st * cp, st * sp, ct)
    }

    /// Point at height `z` and longitude `phi`.
    pub fn from_z_phi(z: f64, phi: f64) -> Self {
        let r = (1.0 - z * z).max(0.0).sqrt();
        let (sp, cp) = phi.sin_cos();
        Self::new_unchecked(r * cp, r * sp, z)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn check_unit(&self) -> Result<()> {
        let n2 = self.norm_squared();
        if (n2 - 1.0).abs() <= UNIT_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotUnit {
                x: self.x,
                y: self.y,
                z: self.z,
                norm: n2.sqrt(),
            })
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Great-circle distance, `acos(x · y)` with the argument clamped to [-1, 1].
    pub fn geodesic_distance(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `(cos θ, sin θ, φ)` of the polar chart. `sin θ` is taken from `x, y`
    /// so that it stays accurate near the poles.
    pub(crate) fn chart(&self) -> (f64, f64, f64) {
        let s = self.x.hypot(self.y);
        let phi = self.y.atan2(self.x);
        (self.z, s, phi)
    }

    pub fn is_near_pole(&self) -> bool {
        self.z.abs() >= 1.0 - POLE_TOLERANCE
    }
}
