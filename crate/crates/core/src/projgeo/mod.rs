//! Projective-plane primitives over ℝ and ℂ.
//!
//! Points and lines are nonzero 3-vectors up to scale, conics are symmetric
//! 3×3 matrices up to scale. Everything is a plain value type.

mod conic;
mod cross_ratio;
mod intersect;
mod map;
mod polarity;

pub use conic::{Conic, ConicClass};
pub use cross_ratio::{cross_ratio, harmonic_conjugate, CrossRatio, PencilElement};
pub use intersect::{conic_conic_intersection, line_conic_intersection};
pub use map::{apply_map, ProjectiveMap, Transformable};
pub use polarity::{
    dualize_conic, orthogonal_polarity, orthogonal_polarity_inverse, polar_line, pole_of_line, tangent_lines_from_point,
};

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::quadratic_roots;
use crate::scalar::Scalar;

macro_rules! homogeneous_type {
    ($name:ident, $what:literal) => {
        #[doc = concat!("Homogeneous ", $what, " of the projective plane; equality is up to scale.")]
        #[derive(Clone, Copy, PartialEq)]
        pub struct $name<S: Scalar = f64> {
            v: Vector3<S>,
        }

        impl<S: Scalar> $name<S> {
            /// Panics on the zero or a non-finite vector; see [`Self::try_from_vector`].
            pub fn new(a: S, b: S, c: S) -> Self {
                Self::from_vector(Vector3::new(a, b, c))
            }

            pub fn from_vector(v: Vector3<S>) -> Self {
                match Self::try_from_vector(v) {
                    Ok(x) => x,
                    Err(e) => panic!(concat!("invalid ", $what, ": {}"), e),
                }
            }

            pub fn try_from_vector(v: Vector3<S>) -> Result<Self> {
                if !v.iter().all(|x| x.is_finite()) {
                    return Err(Error::NonFinite);
                }
                if v.iter().all(|x| x.modulus() == 0.0) {
                    return Err(Error::ZeroVector);
                }
                Ok(Self { v })
            }

            pub fn vector(&self) -> Vector3<S> {
                self.v
            }

            pub fn coords(&self) -> [S; 3] {
                [self.v[0], self.v[1], self.v[2]]
            }

            /// Representative whose largest-magnitude coordinate equals 1.
            pub fn canonical(&self) -> Self {
                Self {
                    v: canonical_vector(&self.v),
                }
            }

            /// Representative of unit Euclidean (Hermitian) norm.
            pub fn unit(&self) -> Vector3<S> {
                self.v.unscale(self.v.norm())
            }

            /// Largest 2×2 minor of the unit representatives; zero iff equal.
            pub fn distance(&self, other: &Self) -> f64 {
                minor_residual(self.unit().as_slice(), other.unit().as_slice())
            }

            pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
                self.distance(other) <= tol
            }

            pub fn to_complex(&self) -> $name<Complex64> {
                $name {
                    v: self.v.map(|x| x.to_complex()),
                }
            }

            /// Real representative, if one exists up to `tol` in the imaginary parts.
            pub fn to_real(&self, tol: f64) -> Option<$name<f64>> {
                let c = canonical_vector(&self.v);
                let mut out = Vector3::zeros();
                for k in 0..3 {
                    let z = c[k].to_complex();
                    if z.im.abs() > tol {
                        return None;
                    }
                    out[k] = z.re;
                }
                Some($name { v: out })
            }
        }

        impl<S: Scalar> fmt::Debug for $name<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    concat!(stringify!($name), "[{:?} : {:?} : {:?}]"),
                    self.v[0], self.v[1], self.v[2]
                )
            }
        }
    };
}

homogeneous_type!(HomogeneousPoint, "point");
homogeneous_type!(HomogeneousLine, "line");

impl HomogeneousPoint<f64> {
    /// The point `(x, y)` of the affine chart `x3 = 1`.
    pub fn affine(x: f64, y: f64) -> Self {
        Self::new(x, y, 1.0)
    }
}

impl<S: Scalar> HomogeneousPoint<S> {
    /// Affine coordinates, or `None` for a point at infinity.
    pub fn to_affine(&self) -> Option<[S; 2]> {
        let w = self.v[2];
        if w.modulus() <= 1e-14 * self.v.norm() {
            return None;
        }
        Some([self.v[0] / w, self.v[1] / w])
    }

    pub fn join(&self, other: &Self) -> Result<HomogeneousLine<S>> {
        HomogeneousLine::try_from_vector(cross(&self.v, &other.v))
    }
}

impl HomogeneousLine<f64> {
    /// The affine line `a x + b y + c = 0`.
    pub fn affine(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c)
    }

    /// Line through the affine point `p` with direction `d`.
    pub fn through(p: [f64; 2], d: [f64; 2]) -> Result<Self> {
        Self::try_from_vector(cross(&Vector3::new(p[0], p[1], 1.0), &Vector3::new(d[0], d[1], 0.0)))
    }
}

impl<S: Scalar> HomogeneousLine<S> {
    /// Bilinear pairing `<l, p>` (no conjugation).
    pub fn incidence(&self, p: &HomogeneousPoint<S>) -> S {
        self.v.dot(&p.v)
    }

    /// `|<l, p>|` relative to the norms of both.
    pub fn incidence_residual(&self, p: &HomogeneousPoint<S>) -> f64 {
        self.incidence(p).modulus() / (self.v.norm() * p.v.norm())
    }

    pub fn contains(&self, p: &HomogeneousPoint<S>, tol: f64) -> bool {
        self.incidence_residual(p) <= tol
    }

    pub fn meet(&self, other: &Self) -> Result<HomogeneousPoint<S>> {
        HomogeneousPoint::try_from_vector(cross(&self.v, &other.v))
    }
}

/// Cross product written out so it works over any [`Scalar`].
pub fn cross<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>) -> Vector3<S> {
    Vector3::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// Adjugate (transposed cofactor matrix).
pub fn adjugate<S: Scalar>(m: &Matrix3<S>) -> Matrix3<S> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

pub fn canonical_vector<S: Scalar>(v: &Vector3<S>) -> Vector3<S> {
    let k = argmax_modulus(v.as_slice());
    let pivot = v[k];
    v.map(|x| x / pivot)
}

pub(crate) fn argmax_modulus<S: Scalar>(v: &[S]) -> usize {
    let mut best = 0;
    for k in 1..v.len() {
        if v[k].modulus() > v[best].modulus() {
            best = k;
        }
    }
    best
}

/// Largest `|a_i b_j - a_j b_i|`; the caller normalizes.
pub fn minor_residual<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            worst = worst.max((a[i] * b[j] - a[j] * b[i]).modulus());
        }
    }
    worst
}

/// Two vectors spanning the complement of `v` in the dual sense: the
/// 3-vectors `v × e_i` for the two coordinates other than `v`'s largest.
pub fn pencil_basis<S: Scalar>(v: &Vector3<S>) -> (Vector3<S>, Vector3<S>) {
    let k = argmax_modulus(v.as_slice());
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let e = |n: usize| {
        let mut u = Vector3::zeros();
        u[n] = S::one();
        u
    };
    (cross(v, &e(i)), cross(v, &e(j)))
}

/// Roots `(mu, nu)` of the binary form `q11 mu^2 + 2 q12 mu nu + q22 nu^2`.
///
/// Returns `None` when all three coefficients vanish relative to `scale`.
pub(crate) fn binary_quadratic_roots(
    q11: Complex64,
    q12: Complex64,
    q22: Complex64,
    scale: f64,
) -> Option<[(Complex64, Complex64); 2]> {
    let one = Complex64::new(1.0, 0.0);
    let tiny = 1e-14 * scale;
    let big = q11.norm().max(q22.norm());
    if big <= tiny {
        if q12.norm() <= tiny {
            return None;
        }
        return Some([(one, Complex64::new(0.0, 0.0)), (Complex64::new(0.0, 0.0), one)]);
    }
    if q22.norm() >= q11.norm() {
        // nu / mu = s solves q22 s^2 + 2 q12 s + q11 = 0
        let (s1, s2) = quadratic_roots(q22, q12, q11);
        Some([(one, s1), (one, s2)])
    } else {
        let (t1, t2) = quadratic_roots(q11, q12, q22);
        Some([(t1, one), (t2, one)])
    }
}

/// Orders two complex 3-vectors lexicographically by (real, imaginary) parts
/// of their canonical representatives.
pub(crate) fn lex_order(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> std::cmp::Ordering {
    let key = |v: &Vector3<Complex64>| -> [f64; 6] {
        let c = canonical_vector(v);
        [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im]
    };
    let (ka, kb) = (key(a), key(b));
    for (x, y) in ka.iter().zip(&kb) {
        // treat differences below rounding as ties so conjugate pairs order by imaginary part
        if (x - y).abs() > 1e-12 {
            return x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal);
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_puts_one_at_largest_coordinate() {
        let p = HomogeneousPoint::new(2.0, -8.0, 4.0).canonical();
        assert_eq!(p.coords(), [-0.25, 1.0, -0.5]);
    }

    #[test]
    fn projective_equality_ignores_scale() {
        let p = HomogeneousPoint::new(1.0, 2.0, 3.0);
        let q = HomogeneousPoint::new(-2.0, -4.0, -6.0);
        assert!(p.proj_eq(&q, 1e-15));
        assert!(!p.proj_eq(&HomogeneousPoint::new(1.0, 2.0, 3.1), 1e-3));
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(
            HomogeneousLine::<f64>::try_from_vector(Vector3::zeros()).unwrap_err(),
            Error::ZeroVector
        );
        assert_eq!(
            HomogeneousPoint::try_from_vector(Vector3::new(f64::NAN, 0.0, 1.0)).unwrap_err(),
            Error::NonFinite
        );
    }

    #[test]
    fn join_and_meet_are_dual() {
        let p = HomogeneousPoint::affine(1.0, 2.0);
        let q = HomogeneousPoint::affine(-3.0, 0.5);
        let l = p.join(&q).unwrap();
        assert!(l.contains(&p, 1e-15) && l.contains(&q, 1e-15));
        let m = HomogeneousLine::affine(1.0, 1.0, -1.0);
        let x = l.meet(&m).unwrap();
        assert!(l.contains(&x, 1e-14) && m.contains(&x, 1e-14));
    }

    #[test]
    fn adjugate_times_matrix_is_determinant() {
        let m = Matrix3::new(2.0, 1.0, 0.5, 1.0, -3.0, 0.25, 0.5, 0.25, 4.0);
        let prod = adjugate(&m) * m;
        let d = m.determinant();
        assert!((prod - Matrix3::identity() * d).norm() < 1e-12);
    }

    #[test]
    fn binary_quadratic_handles_vanishing_leading_terms() {
        let z = Complex64::new(0.0, 0.0);
        let r = binary_quadratic_roots(z, Complex64::new(1.0, 0.0), z, 1.0).unwrap();
        assert_eq!(r[0].1, z);
        assert_eq!(r[1].0, z);
        assert!(binary_quadratic_roots(z, z, z, 1.0).is_none());
    }
}
