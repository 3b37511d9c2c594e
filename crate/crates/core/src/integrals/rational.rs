use std::fmt;

use num_complex::Complex64;

use super::moment::MomentVector;
use crate::error::{Error, Result};
use crate::poly::{roots, HomPoly};
use crate::scalar::{tol, Real};

/// A ratio of two homogeneous polynomials of equal degree in the moment
/// vector; its value depends only on the unoriented line.
#[derive(Clone, PartialEq)]
pub struct RationalIntegral {
    numerator: HomPoly,
    denominator: HomPoly,
}

impl RationalIntegral {
    pub fn new(numerator: HomPoly, denominator: HomPoly) -> Result<Self> {
        if numerator.degree() != denominator.degree() || denominator.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        Ok(Self { numerator, denominator })
    }

    pub fn numerator(&self) -> &HomPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &HomPoly {
        &self.denominator
    }

    pub fn degree(&self) -> u32 {
        self.numerator.degree()
    }

    /// Value at `m`. Fails when the denominator is below `1e-12` relative to
    /// its coefficient scale at `|m|`.
    pub fn eval(&self, m: &MomentVector) -> Result<f64> {
        self.eval_coords(m.coords())
    }

    /// [`Self::eval`] on raw homogeneous coordinates in any real type.
    pub fn eval_coords<R: Real>(&self, m: [R; 3]) -> Result<R> {
        let den = self.denominator.eval(m);
        let size = m.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
        let scale = self.denominator.l1_norm() * size.powi(self.degree() as i32);
        let magnitude = den.to_f64().abs();
        if magnitude.is_nan() || magnitude <= tol::POLAR_LOCUS * scale {
            return Err(Error::OnPolarLocus);
        }
        Ok(self.numerator.eval(m) / den)
    }

    /// Whether numerator and denominator share a factor.
    ///
    /// Both parts are restricted to two fixed generic lines; a common factor
    /// shows up as a common root on each. Root clusters (multiple factors)
    /// are replaced by their centroid, which is well conditioned.
    pub fn has_common_factor(&self) -> bool {
        const LINES: [([f64; 3], [f64; 3]); 2] = [
            ([0.31, -0.72, 0.55], [-0.47, 0.19, 0.83]),
            ([-0.63, 0.28, 0.41], [0.52, 0.77, -0.36]),
        ];
        LINES.iter().all(|(p, q)| {
            let p = p.map(|x| Complex64::new(x, 0.0));
            let q = q.map(|x| Complex64::new(x, 0.0));
            let a = clustered_roots(&self.numerator.restrict_to_line(p, q));
            let b = clustered_roots(&self.denominator.restrict_to_line(p, q));
            a.iter()
                .any(|x| b.iter().any(|y| (x - y).norm() < 1e-7 * (1.0 + x.norm())))
        })
    }
}

fn clustered_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for z in roots(coeffs) {
        match out
            .iter_mut()
            .find(|(c, k)| (*c / *k as f64 - z).norm() < 1e-3 * (1.0 + z.norm()))
        {
            Some((c, k)) => {
                *c += z;
                *k += 1;
            }
            None => out.push((z, 1)),
        }
    }
    out.into_iter().map(|(c, k)| c / k as f64).collect()
}

impl fmt::Display for RationalIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

impl fmt::Debug for RationalIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalIntegral[{self}]")
    }
}
