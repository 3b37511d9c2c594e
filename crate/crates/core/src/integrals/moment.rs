use nalgebra::Vector3;

use crate::billiard::field_line_vector;
use crate::error::{Error, Result};
use crate::projgeo::HomogeneousLine;

/// Dual coordinates of the oriented line through `x` with direction `v`:
/// `(x1, x2, 1) × (v1, v2, 0) = (-v2, v1, x1 v2 - x2 v1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentVector([f64; 3]);

impl MomentVector {
    pub fn from_coords(m: [f64; 3]) -> Self {
        Self(m)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::from(self.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// The same coordinates read as a line of the affine chart.
    pub fn line(&self) -> HomogeneousLine<f64> {
        HomogeneousLine::from_vector(self.vector())
    }
}

pub fn moment_vector(x: [f64; 2], v: [f64; 2]) -> Result<MomentVector> {
    if v[0] == 0.0 && v[1] == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    Ok(MomentVector(field_line_vector(x, v)))
}
