use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::HomPoly;
use crate::projgeo::{tangent_lines_from_point, Conic, HomogeneousLine, HomogeneousPoint};
use crate::sampling::rng;

const MAX_DEGREE: u32 = 6;
const GRADIENT_FLOOR: f64 = 1e-10;

/// A real plane curve `F(x1, x2, 1) = 0` given by a homogeneous polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitCurve {
    poly: HomPoly,
}

impl ImplicitCurve {
    pub fn new(poly: HomPoly) -> Result<Self> {
        if poly.degree() == 0 || poly.degree() > MAX_DEGREE {
            return Err(Error::InvalidCase(format!(
                "implicit curves need degree 1..={MAX_DEGREE}"
            )));
        }
        Ok(Self { poly })
    }

    /// The curve of a real conic.
    pub fn from_conic(c: &Conic) -> Self {
        Self {
            poly: HomPoly::quadratic_form(c.matrix()),
        }
    }

    pub fn poly(&self) -> &HomPoly {
        &self.poly
    }

    pub fn value(&self, p: [f64; 2]) -> f64 {
        self.poly.eval([p[0], p[1], 1.0])
    }

    /// Central-difference gradient; step scaled to the point.
    pub fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        let h = 1e-6 * (1.0 + p[0].abs().max(p[1].abs()));
        [
            (self.value([p[0] + h, p[1]]) - self.value([p[0] - h, p[1]])) / (2.0 * h),
            (self.value([p[0], p[1] + h]) - self.value([p[0], p[1] - h])) / (2.0 * h),
        ]
    }

    /// Newton projection along the gradient onto the curve.
    pub fn refine(&self, start: [f64; 2]) -> Result<[f64; 2]> {
        let mut p = start;
        for _ in 0..60 {
            let f = self.value(p);
            let g = self.gradient(p);
            let g2 = g[0] * g[0] + g[1] * g[1];
            if g2.sqrt() < GRADIENT_FLOOR {
                return Err(Error::SingularCurvePoint);
            }
            p = [p[0] - f * g[0] / g2, p[1] - f * g[1] / g2];
            if f.abs() < 1e-15 * (1.0 + g2.sqrt()) {
                return Ok(p);
            }
        }
        if self.value(p).abs() < 1e-12 {
            Ok(p)
        } else {
            Err(Error::NoConvergence)
        }
    }
}

/// An axis-aligned box selecting an arc of an implicit curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl ArcBox {
    pub fn contains(&self, p: [f64; 2]) -> bool {
        (self.x.0..=self.x.1).contains(&p[0]) && (self.y.0..=self.y.1).contains(&p[1])
    }
}

/// A point `A` of the curve with one of the two lines through it tangent to
/// `α`, and the contact point `B` of that line.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialPair {
    pub a: HomogeneousPoint<f64>,
    pub line: HomogeneousLine<Complex64>,
    pub b: HomogeneousPoint<Complex64>,
}

/// Contact point of a tangent line: its pole with respect to `α`.
pub fn contact_point(
    alpha: &Conic<Complex64>,
    line: &HomogeneousLine<Complex64>,
) -> Result<HomogeneousPoint<Complex64>> {
    HomogeneousPoint::try_from_vector(alpha.adjugate() * line.vector())
}

/// Samples `n` points of the arc (random starts in the box, refined onto the
/// curve) and returns both tangential pairs at each.
pub fn tangential_correspondence_samples(
    curve: &ImplicitCurve,
    arc: &ArcBox,
    alpha: &Conic,
    n: usize,
    seed: u64,
) -> Result<Vec<TangentialPair>> {
    let alpha_c = alpha.to_complex();
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(2 * n);
    let mut found = 0;
    let mut attempts = 0;
    while found < n {
        attempts += 1;
        if attempts > 100 * n.max(1) {
            return Err(Error::NoConvergence);
        }
        let start = [rng.gen_range(arc.x.0..=arc.x.1), rng.gen_range(arc.y.0..=arc.y.1)];
        let a = match curve.refine(start) {
            Ok(a) if arc.contains(a) => a,
            Ok(_) | Err(Error::NoConvergence) => continue,
            Err(e) => return Err(e),
        };
        let point = HomogeneousPoint::affine(a[0], a[1]);
        for line in tangent_lines_from_point(&point, alpha)? {
            let b = contact_point(&alpha_c, &line)?;
            out.push(TangentialPair { a: point, line, b });
        }
        found += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_points_from_outside() {
        let alpha = Conic::unit_circle();
        let lines = tangent_lines_from_point(&HomogeneousPoint::affine(2.0, 0.0), &alpha).unwrap();
        let mut ys: Vec<f64> = lines
            .iter()
            .map(|l| {
                let b = contact_point(&alpha.to_complex(), l).unwrap().to_real(1e-12).unwrap();
                let b = b.to_affine().unwrap();
                assert!((b[0] - 0.5).abs() < 1e-14);
                b[1]
            })
            .collect();
        ys.sort_by(f64::total_cmp);
        assert!((ys[0] + 0.75f64.sqrt()).abs() < 1e-14 && (ys[1] - 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn samples_satisfy_the_correspondence() {
        let curve = ImplicitCurve::from_conic(&Conic::circle(0.0, 0.0, 2.0));
        let arc = ArcBox {
            x: (-3.0, 3.0),
            y: (0.2, 3.0),
        };
        let alpha = Conic::ellipse(1.0, 0.5).to_complex();
        let pairs = tangential_correspondence_samples(&curve, &arc, &Conic::ellipse(1.0, 0.5), 40, 3).unwrap();
        assert_eq!(pairs.len(), 80);
        for p in &pairs {
            assert!(alpha.point_residual(&p.b) < 1e-10);
            assert!(p.line.incidence_residual(&p.a.to_complex()) < 1e-10);
            assert!(p.line.incidence_residual(&p.b) < 1e-10);
            assert!(curve.value(p.a.to_affine().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn point_on_alpha_is_its_own_contact() {
        let alpha = Conic::unit_circle();
        let a = HomogeneousPoint::affine(0.6, 0.8);
        for l in tangent_lines_from_point(&a, &alpha).unwrap() {
            let b = contact_point(&alpha.to_complex(), &l).unwrap();
            assert!(b.distance(&a.to_complex()) < 1e-7);
        }
    }

    #[test]
    fn singular_point_rejected() {
        // the node of x^2 - y^2 at the origin
        let node = ImplicitCurve::new(&HomPoly::var(0).pow(2) - &HomPoly::var(1).pow(2)).unwrap();
        assert_eq!(node.refine([0.0, 0.0]).unwrap_err(), Error::SingularCurvePoint);
    }
}
