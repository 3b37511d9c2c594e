use nalgebra::Vector3;

use super::{minor_residual, HomogeneousLine, HomogeneousPoint};
use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

/// Something that lives in a one-dimensional pencil: collinear points or
/// concurrent lines.
pub trait PencilElement<S: Scalar>: Sized {
    fn vector(&self) -> Vector3<S>;
    fn try_from_vector(v: Vector3<S>) -> Result<Self>;
}

impl<S: Scalar> PencilElement<S> for HomogeneousPoint<S> {
    fn vector(&self) -> Vector3<S> {
        HomogeneousPoint::vector(self)
    }
    fn try_from_vector(v: Vector3<S>) -> Result<Self> {
        HomogeneousPoint::try_from_vector(v)
    }
}

impl<S: Scalar> PencilElement<S> for HomogeneousLine<S> {
    fn vector(&self) -> Vector3<S> {
        HomogeneousLine::vector(self)
    }
    fn try_from_vector(v: Vector3<S>) -> Result<Self> {
        HomogeneousLine::try_from_vector(v)
    }
}

/// A cross-ratio value; `Infinite` when the fourth element sits at the pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossRatio<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> CrossRatio<S> {
    pub fn finite(self) -> Option<S> {
        match self {
            CrossRatio::Finite(x) => Some(x),
            CrossRatio::Infinite => None,
        }
    }
}

fn unit<S: Scalar>(v: Vector3<S>) -> Vector3<S> {
    v.unscale(v.norm())
}

/// `|det(a, b, c)|` for unit vectors.
fn coplanarity<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>, c: &Vector3<S>) -> f64 {
    super::cross(a, b).dot(c).modulus()
}

/// Coefficients `(s, t)` with `c = s a + t b`, from the best-conditioned 2×2 minor.
fn decompose<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>, c: &Vector3<S>) -> (S, S) {
    let mut best = (0, 1);
    let mut best_det = S::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = a[i] * b[j] - a[j] * b[i];
        if d.modulus() > best_det.modulus() {
            best = (i, j);
            best_det = d;
        }
    }
    let (i, j) = best;
    let s = (c[i] * b[j] - c[j] * b[i]) / best_det;
    let t = (a[i] * c[j] - a[j] * c[i]) / best_det;
    (s, t)
}

/// Cross-ratio `(a, b; c, d)`: with `x = s a + t b`, the ratio of `t/s` at `c` to that at `d`.
///
/// Slopes `(0, ∞, 1, -1)` of lines through a point give `-1`.
pub fn cross_ratio<S: Scalar, E: PencilElement<S>>(a: &E, b: &E, c: &E, d: &E) -> Result<CrossRatio<S>> {
    let (a, b, c, d) = (unit(a.vector()), unit(b.vector()), unit(c.vector()), unit(d.vector()));
    if minor_residual(a.as_slice(), b.as_slice()) <= tol::ALGEBRAIC {
        return Err(Error::DegenerateQuadruple);
    }
    let residual = coplanarity(&a, &b, &c).max(coplanarity(&a, &b, &d));
    if residual > tol::ALGEBRAIC {
        return Err(Error::NotInPencil { residual });
    }
    let (sc, tc) = decompose(&a, &b, &c);
    let (sd, td) = decompose(&a, &b, &d);
    let num = tc * sd;
    let den = sc * td;
    if den.modulus() <= 1e-14 * num.modulus() || (den.modulus() == 0.0 && num.modulus() == 0.0) {
        return Ok(CrossRatio::Infinite);
    }
    Ok(CrossRatio::Finite(num / den))
}

/// The fourth harmonic element: the `b` with `(t, n; a, b) = -1`.
pub fn harmonic_conjugate<S: Scalar, E: PencilElement<S>>(t: &E, n: &E, a: &E) -> Result<E> {
    let (tv, nv, av) = (unit(t.vector()), unit(n.vector()), unit(a.vector()));
    if minor_residual(tv.as_slice(), nv.as_slice()) <= tol::ALGEBRAIC {
        return Err(Error::DegeneratePencil);
    }
    let residual = coplanarity(&tv, &nv, &av);
    if residual > tol::ALGEBRAIC {
        return Err(Error::NotConcurrent { residual });
    }
    let (s, u) = decompose(&tv, &nv, &av);
    E::try_from_vector(tv * s - nv * u)
}
