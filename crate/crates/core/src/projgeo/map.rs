use nalgebra::Matrix3;

use super::{Conic, HomogeneousLine, HomogeneousPoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Invertible linear map of the homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap<S: Scalar = f64> {
    matrix: Matrix3<S>,
    inverse: Matrix3<S>,
}

impl<S: Scalar> ProjectiveMap<S> {
    /// Rejects maps with `|det| < 1e-12 |M|^3`.
    pub fn new(matrix: Matrix3<S>) -> Result<Self> {
        let norm = matrix.norm();
        if !(norm.is_finite() && norm > 0.0) || matrix.determinant().modulus() < 1e-12 * norm.powi(3) {
            return Err(Error::SingularMap);
        }
        let inverse = matrix.try_inverse().ok_or(Error::SingularMap)?;
        Ok(Self { matrix, inverse })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix3::identity(),
            inverse: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<S> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix3<S> {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.inverse,
            inverse: self.matrix,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix * other.matrix,
            inverse: other.inverse * self.inverse,
        }
    }
}

/// Objects a projective map acts on.
pub trait Transformable<S: Scalar> {
    fn transformed(&self, m: &ProjectiveMap<S>) -> Self;
}

impl<S: Scalar> Transformable<S> for HomogeneousPoint<S> {
    fn transformed(&self, m: &ProjectiveMap<S>) -> Self {
        HomogeneousPoint::from_vector(m.matrix * self.vector())
    }
}

impl<S: Scalar> Transformable<S> for HomogeneousLine<S> {
    fn transformed(&self, m: &ProjectiveMap<S>) -> Self {
        HomogeneousLine::from_vector(m.inverse.transpose() * self.vector())
    }
}

impl<S: Scalar> Transformable<S> for Conic<S> {
    fn transformed(&self, m: &ProjectiveMap<S>) -> Self {
        Conic::from_matrix(m.inverse.transpose() * self.matrix() * m.inverse)
            .expect("congruence by an invertible map keeps the matrix nonzero")
    }
}

/// Points by `M`, lines by `M^-T`, conics by `M^-T C M^-1`; incidence is preserved.
pub fn apply_map<S: Scalar, T: Transformable<S>>(m: &ProjectiveMap<S>, obj: &T) -> T {
    obj.transformed(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_map_rejected() {
        let m = Matrix3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0);
        assert_eq!(ProjectiveMap::new(m).unwrap_err(), Error::SingularMap);
    }

    #[test]
    fn identity_fixes_everything() {
        let id = ProjectiveMap::identity();
        let p = HomogeneousPoint::affine(0.3, -2.0);
        let c = Conic::ellipse(2.0, 1.0);
        assert_eq!(apply_map(&id, &p), p);
        assert!(apply_map(&id, &c).proj_eq(&c, 0.0));
    }

    #[test]
    fn mapped_conic_contains_mapped_points() {
        let m = ProjectiveMap::new(Matrix3::new(1.0, 0.2, -0.4, 0.3, 2.0, 0.1, 0.05, -0.2, 1.0)).unwrap();
        let c = Conic::ellipse(2.0, 1.0);
        let img = apply_map(&m, &c);
        for k in 0..8 {
            let t = k as f64 * 0.8;
            let p = HomogeneousPoint::affine(2.0 * t.cos(), t.sin());
            assert!(img.contains(&apply_map(&m, &p), 1e-14));
        }
    }
}
