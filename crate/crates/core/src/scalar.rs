//! Scalar fields and the shared numeric tolerances.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::ComplexField;
use num_complex::Complex64;

use crate::dd::DoubleDouble;

/// Real or complex double-precision scalar.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn to_complex(self) -> Complex64;

    /// Returns the value as a real number when the imaginary part is below `tol`.
    fn try_real(self, tol: f64) -> Option<f64> {
        let z = self.to_complex();
        (z.im.abs() <= tol * z.norm().max(1.0)).then_some(z.re)
    }
}

impl Scalar for f64 {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Commutative ring operations needed to evaluate polynomials.
pub trait Ring:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + From<f64>
{
}

impl<T> Ring for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + From<f64> {}

/// Ordered real field: `f64` or [`DoubleDouble`].
pub trait Real: Ring + Div<Output = Self> + PartialOrd {
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Real for DoubleDouble {
    fn to_f64(self) -> f64 {
        self.hi()
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
}

/// Default tolerances. Every operation that compares against one of these
/// also accepts an explicit override somewhere in its API.
pub mod tol {
    /// Relative algebraic tolerance for incidence and projective equality.
    pub const ALGEBRAIC: f64 = 1e-10;
    /// Singular value ratio below which a conic loses rank.
    pub const RANK: f64 = 1e-9;
    /// Parameter radius around base and tangency points.
    pub const EXCLUSION: f64 = 1e-7;
    /// Relative separation below which an intersection pair counts as collapsed.
    pub const TANGENT_SEPARATION: f64 = 1e-7;
    /// Imaginary part below which a complex result is truncated to real.
    pub const REAL_IMAG: f64 = 1e-9;
    /// Floor used in denominators of relative jumps.
    pub const RELATIVE_FLOOR: f64 = 1e-6;
    /// Relative magnitude of a denominator below which a rational function is on its polar locus.
    pub const POLAR_LOCUS: f64 = 1e-12;
    /// Default tolerance for complex tangency residuals.
    pub const TANGENCY: f64 = 1e-9;
}
