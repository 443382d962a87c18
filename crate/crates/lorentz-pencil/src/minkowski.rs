//! Lorentzian vector kernel for ℝ³ with metric signature (+, +, −).
//!
//! The third coordinate carries the minus sign, so `inner` is
//! `x1*y1 + x2*y2 - x3*y3` and the vector product differs from the
//! Euclidean one in its third component.
//!
//! ```
//! use lorentz_pencil::Vec3;
//!
//! let e1 = Vec3::new(1.0, 0.0, 0.0);
//! let e2 = Vec3::new(0.0, 1.0, 0.0);
//! // third component flips sign relative to the Euclidean cross product
//! assert_eq!(e1.lorentz_cross(&e2), Vec3::new(0.0, 0.0, -1.0));
//! // Lorentz-orthogonal to both factors
//! assert_eq!(e1.lorentz_cross(&e2).inner(&e1), 0.0);
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Causal character of a vector under the Lorentzian inner product.
///
/// The zero vector counts as spacelike by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinkowskiError {
    #[error("cannot normalize a null vector ({0:?})")]
    NullVector(Vec3),
}

/// A point or vector of ℝ³ carrying the (+, +, −) metric.
///
/// No causal tag is stored; classification is always recomputed so it
/// cannot go stale after arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Lorentzian inner product `x1*y1 + x2*y2 - x3*y3`.
    pub fn inner(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y - self.z * other.z
    }

    /// Lorentzian vector product.
    ///
    /// The third component is the negative of the Euclidean cross
    /// product's third component; this makes the result
    /// Lorentz-orthogonal to both arguments.
    pub fn lorentz_cross(&self, other: &Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.y * other.x - self.x * other.y,
        }
    }

    /// Causal classification with a tolerance relative to the Euclidean
    /// magnitude. The exact trichotomy is unattainable in floating point
    /// near the light cone.
    pub fn causal_class(&self) -> CausalClass {
        let q = self.inner(self);
        let tol = 1e-10 * self.euclid_norm_sq().max(1.0);
        if q.abs() <= tol {
            if *self == Vec3::ZERO {
                CausalClass::Spacelike
            } else {
                CausalClass::Null
            }
        } else if q > 0.0 {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        }
    }

    /// `sqrt(|<X,X>|)`.
    pub fn lorentz_norm(&self) -> f64 {
        self.inner(self).abs().sqrt()
    }

    /// Scale to Lorentzian unit length. Fails on (numerically) null vectors.
    pub fn normalize(&self) -> Result<Vec3, MinkowskiError> {
        if self.causal_class() == CausalClass::Null {
            return Err(MinkowskiError::NullVector(*self));
        }
        Ok(*self * (1.0 / self.lorentz_norm()))
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn euclid_dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
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
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}
