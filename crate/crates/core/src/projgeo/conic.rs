use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{adjugate, minor_residual, HomogeneousLine, HomogeneousPoint};
use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

/// Rank class of a conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicClass {
    Regular,
    /// Rank 2: a pair of distinct (possibly complex) lines.
    LinePair,
    /// Rank 1: a doubled line.
    DoubleLine,
}

/// Conic `{<C x, x> = 0}` given by a symmetric matrix up to scale.
#[derive(Clone, PartialEq)]
pub struct Conic<S: Scalar = f64> {
    matrix: Matrix3<S>,
    class: ConicClass,
}

impl<S: Scalar> Conic<S> {
    /// Symmetrizes `m` and classifies it by singular values.
    pub fn from_matrix(m: Matrix3<S>) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let matrix = (m + m.transpose()).map(|x| x * S::from_real(0.5));
        let sv = matrix.svd(false, false).singular_values;
        let top = sv.max();
        if top == 0.0 {
            return Err(Error::ZeroVector);
        }
        let rank = sv.iter().filter(|s| **s > tol::RANK * top).count();
        let class = match rank {
            3 => ConicClass::Regular,
            2 => ConicClass::LinePair,
            _ => ConicClass::DoubleLine,
        };
        Ok(Self { matrix, class })
    }

    pub fn matrix(&self) -> &Matrix3<S> {
        &self.matrix
    }

    pub fn class(&self) -> ConicClass {
        self.class
    }

    pub fn is_regular(&self) -> bool {
        self.class == ConicClass::Regular
    }

    pub fn adjugate(&self) -> Matrix3<S> {
        adjugate(&self.matrix)
    }

    /// `<C p, p>`.
    pub fn eval(&self, p: &HomogeneousPoint<S>) -> S {
        let v = p.vector();
        v.dot(&(self.matrix * v))
    }

    /// `|<C p, p>|` relative to `|C| |p|^2`.
    pub fn point_residual(&self, p: &HomogeneousPoint<S>) -> f64 {
        let v = p.vector();
        self.eval(p).modulus() / (self.matrix.norm() * v.norm_squared())
    }

    /// `|<adj(C) l, l>|` relative to `|adj C| |l|^2`: zero iff `l` is tangent.
    pub fn tangency_residual(&self, l: &HomogeneousLine<S>) -> f64 {
        let b = self.adjugate();
        let v = l.vector();
        v.dot(&(b * v)).modulus() / (b.norm() * v.norm_squared())
    }

    pub fn contains(&self, p: &HomogeneousPoint<S>, tol: f64) -> bool {
        self.point_residual(p) <= tol
    }

    /// Largest 2×2 minor between the unit-normalized matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.matrix.unscale(self.matrix.norm());
        let b = other.matrix.unscale(other.matrix.norm());
        minor_residual(a.as_slice(), b.as_slice())
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn to_complex(&self) -> Conic<Complex64> {
        Conic {
            matrix: self.matrix.map(|x| x.to_complex()),
            class: self.class,
        }
    }
}

impl Conic<f64> {
    /// Coefficients `[a11, a12, a13, a22, a23, a33]` of
    /// `a11 x^2 + 2 a12 x y + 2 a13 x z + a22 y^2 + 2 a23 y z + a33 z^2`.
    pub fn from_coefficients(c: [f64; 6]) -> Result<Self> {
        Self::from_matrix(Matrix3::new(c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5]))
    }

    pub fn coefficients(&self) -> [f64; 6] {
        let m = &self.matrix;
        [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)], m[(2, 2)]]
    }

    pub fn unit_circle() -> Self {
        Self::circle(0.0, 0.0, 1.0)
    }

    pub fn circle(cx: f64, cy: f64, r: f64) -> Self {
        Self::from_coefficients([1.0, 0.0, -cx, 1.0, -cy, cx * cx + cy * cy - r * r])
            .expect("finite circle coefficients")
    }

    /// `x^2 / a^2 + y^2 / b^2 = 1`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::from_matrix(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            1.0 / (a * a),
            1.0 / (b * b),
            -1.0,
        )))
        .expect("finite ellipse coefficients")
    }

    /// The parabola `x2 = x1^2`, i.e. `x1^2 - x2 x3 = 0`.
    pub fn parabola() -> Self {
        Self::from_coefficients([1.0, 0.0, 0.0, 0.0, -0.5, 0.0]).expect("constant coefficients")
    }

    /// The isotropic line pair `x1^2 + x2^2 = 0` of the Euclidean plane.
    pub fn isotropic() -> Self {
        Self::from_coefficients([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).expect("constant coefficients")
    }
}

impl<S: Scalar> fmt::Debug for Conic<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Conic")
            .field("class", &self.class)
            .field("matrix", &self.matrix.as_slice())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_by_rank() {
        assert_eq!(Conic::unit_circle().class(), ConicClass::Regular);
        assert_eq!(Conic::isotropic().class(), ConicClass::LinePair);
        let double = Conic::from_coefficients([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(double.class(), ConicClass::DoubleLine);
        assert_eq!(Conic::parabola().class(), ConicClass::Regular);
    }

    #[test]
    fn construction_symmetrizes() {
        let c = Conic::from_matrix(Matrix3::new(1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0)).unwrap();
        assert_eq!(c.matrix(), &c.matrix().transpose());
        assert_eq!(c.matrix()[(0, 1)], 1.0);
    }

    #[test]
    fn classification_is_scale_free() {
        let tiny = Conic::from_matrix(Conic::unit_circle().matrix() * 1e-30).unwrap();
        assert!(tiny.is_regular());
    }

    #[test]
    fn circle_contains_its_points() {
        let c = Conic::circle(1.0, -2.0, 3.0);
        let t: f64 = 0.7;
        let p = HomogeneousPoint::affine(1.0 + 3.0 * t.cos(), -2.0 + 3.0 * t.sin());
        assert!(c.contains(&p, 1e-15));
    }
}
