use super::rational::RationalIntegral;
use crate::billiard::ExoticCase;
use crate::error::{Error, Result};
use crate::poly::HomPoly;
use crate::projgeo::Conic;
use crate::scalar::tol;

/// The moment-vector variables as they appear in the formulas:
/// `v1 = M2`, `v2 = -M1`, `Δ = M3`.
struct Vars {
    v1: HomPoly,
    v2: HomPoly,
    delta: HomPoly,
}

impl Vars {
    fn new() -> Self {
        Self {
            v1: HomPoly::var(1),
            v2: -HomPoly::var(0),
            delta: HomPoly::var(2),
        }
    }

    /// `4 v1 Δ - c v2^2`; `c = 1` gives the tangency form of the parabola.
    fn conic_factor(&self, c: f64) -> HomPoly {
        (&self.v1 * &self.delta).scale(4.0) - (&self.v2 * &self.v2).scale(c)
    }

    fn product(factors: &[HomPoly]) -> HomPoly {
        factors.iter().fold(HomPoly::constant(1.0), |acc, f| &acc * f)
    }
}

/// The canonical integral of an exotic case on the parabola, stored verbatim
/// (no normalization of constant factors).
pub fn canonical_integral(case: ExoticCase) -> Result<RationalIntegral> {
    let x = Vars::new();
    let (v1, v2, d) = (&x.v1, &x.v2, &x.delta);
    let q = x.conic_factor(1.0);
    let (num, den) = match case {
        ExoticCase::A1 { n } => {
            let n = positive(n)?;
            let mut den = v1 * v1;
            for j in 1..=n {
                let (j, nf) = (j as f64, n as f64);
                let c = -4.0 * j * (2.0 * nf + 1.0 - j) / (2.0 * nf + 1.0 - 2.0 * j).powi(2);
                den = &den * &x.conic_factor(c).pow(2);
            }
            (q.pow(2 * n + 1), den)
        }
        ExoticCase::A2 { n } => {
            let n = positive(n)?;
            let mut den = v1 * v2;
            for j in 1..=n {
                let (j, nf) = (j as f64, n as f64);
                let c = -j * (2.0 * nf + 2.0 - j) / (nf + 1.0 - j).powi(2);
                den = &den * &x.conic_factor(c);
            }
            (q.pow(n + 1), den)
        }
        ExoticCase::B1 => (
            q.pow(2),
            Vars::product(&[x.conic_factor(-3.0), v1.scale(2.0) + v2, d.scale(2.0) + v2]),
        ),
        ExoticCase::B2 => {
            let first = v2 * v2 + (d * d).scale(4.0) + (v1 * d).scale(4.0) + (v1 * v1).scale(4.0);
            let second = v2 * v2 + (v1 * v1).scale(4.0);
            (q.pow(2), &first * &second)
        }
        ExoticCase::C1 => {
            let cubic = v1.pow(3) + d.pow(3) + &(v1 * v2) * d;
            (q.pow(3), cubic.pow(2))
        }
        ExoticCase::C2 => {
            let quad = v1 * v1 + (v2 * v2).scale(2.0) + (v1 * v2).scale(5.0);
            let cubic = v2.pow(3) + (&(v2 * v2) * v1).scale(2.0) + &quad * d + &(d * d) * v1;
            (q.pow(3), cubic.pow(2))
        }
        ExoticCase::D => {
            let quad = (v1 * v1).scale(4.0) + (v2 * v2).scale(5.0) + (v1 * v2).scale(28.0);
            let cubic = (&(v2 * v2) * v1).scale(8.0) + v2.pow(3).scale(2.0) + &quad * d + (&(d * d) * v1).scale(16.0);
            let den = Vars::product(&[v1 * d + (v2 * v2).scale(2.0), v1.scale(2.0) + v2, cubic]);
            (q.pow(3), den)
        }
    };
    RationalIntegral::new(num, den)
}

fn positive(n: u32) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidCase("the 2a families need N >= 1".into()));
    }
    Ok(n)
}

/// `<U M, M> / <A M, M>` for two conics of a dual pencil (in line coordinates).
pub fn pencil_ratio_integral(upper: &Conic, lower: &Conic) -> Result<RationalIntegral> {
    if upper.proj_eq(lower, tol::ALGEBRAIC) {
        return Err(Error::ProportionalConics);
    }
    RationalIntegral::new(
        HomPoly::quadratic_form(upper.matrix()),
        HomPoly::quadratic_form(lower.matrix()),
    )
}

/// `H^2 / (M1^2 + M2^2)^d` for a homogeneous `H` of degree `d`.
pub fn invariant_curve_integral(curve: &HomPoly, degree: u32) -> Result<RationalIntegral> {
    if curve.degree() != degree || curve.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let euclid = &HomPoly::var(0).pow(2) + &HomPoly::var(1).pow(2);
    RationalIntegral::new(curve.pow(2), euclid.pow(degree))
}
