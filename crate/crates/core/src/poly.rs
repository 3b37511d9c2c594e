//! Homogeneous polynomials in three variables and univariate root finding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Homogeneous polynomial in `(M1, M2, M3)` with dense coefficients in
/// graded-lex order: `M1` exponent descending, then `M2` descending.
#[derive(Clone, PartialEq)]
pub struct HomPoly {
    degree: u32,
    coeffs: Vec<f64>,
}

fn monomial_count(degree: u32) -> usize {
    let d = degree as usize;
    (d + 1) * (d + 2) / 2
}

fn monomial_index(degree: u32, i: u32, j: u32) -> usize {
    let r = (degree - i) as usize;
    r * (r + 1) / 2 + (r - j as usize)
}

/// Exponent triples of all degree-`d` monomials, in storage order.
pub fn monomials(degree: u32) -> impl Iterator<Item = [u32; 3]> {
    (0..=degree)
        .rev()
        .flat_map(move |i| (0..=degree - i).rev().map(move |j| [i, j, degree - i - j]))
}

impl HomPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; monomial_count(degree)],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The coordinate function `M_{index+1}`.
    pub fn var(index: usize) -> Self {
        assert!(index < 3, "variable index out of range");
        let mut p = Self::zero(1);
        let mut e = [0u32; 3];
        e[index] = 1;
        p.coeffs[monomial_index(1, e[0], e[1])] = 1.0;
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` terms; every term
    /// must have the same total degree.
    pub fn from_terms(terms: &[([u32; 3], f64)]) -> Result<Self> {
        let Some((first, _)) = terms.first() else {
            return Ok(Self::zero(0));
        };
        let degree: u32 = first.iter().sum();
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::NotHomogeneous);
            }
            p.coeffs[monomial_index(degree, e[0], e[1])] += c;
        }
        Ok(p)
    }

    /// The quadratic form `<S M, M>` of a symmetric matrix given row-major.
    pub fn quadratic_form(m: &nalgebra::Matrix3<f64>) -> Self {
        let mut p = Self::zero(2);
        for a in 0..3 {
            for b in 0..3 {
                let mut e = [0u32; 3];
                e[a] += 1;
                e[b] += 1;
                p.coeffs[monomial_index(2, e[0], e[1])] += m[(a, b)];
            }
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [u32; 3]) -> f64 {
        if e.iter().sum::<u32>() != self.degree {
            return 0.0;
        }
        self.coeffs[monomial_index(self.degree, e[0], e[1])]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at `m` over any commutative ring (f64, complex, double-double).
    pub fn eval<T: Ring>(&self, m: [T; 3]) -> T {
        let d = self.degree as usize;
        let mut powers = [
            vec![T::from(1.0); d + 1],
            vec![T::from(1.0); d + 1],
            vec![T::from(1.0); d + 1],
        ];
        for (v, pw) in powers.iter_mut().enumerate() {
            for k in 1..=d {
                pw[k] = pw[k - 1] * m[v];
            }
        }
        let mut acc = T::from(0.0);
        for (e, c) in monomials(self.degree).zip(&self.coeffs) {
            if *c != 0.0 {
                acc =
                    acc + T::from(*c) * powers[0][e[0] as usize] * powers[1][e[1] as usize] * powers[2][e[2] as usize];
            }
        }
        acc
    }

    /// Restriction to the complex line `p + s q`, as ascending coefficients in `s`.
    pub fn restrict_to_line(&self, p: [Complex64; 3], q: [Complex64; 3]) -> Vec<Complex64> {
        let lin: [Vec<Complex64>; 3] = [vec![p[0], q[0]], vec![p[1], q[1]], vec![p[2], q[2]]];
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree as usize + 1];
        for (e, c) in monomials(self.degree).zip(&self.coeffs) {
            if *c == 0.0 {
                continue;
            }
            let mut term = vec![Complex64::new(*c, 0.0)];
            for v in 0..3 {
                for _ in 0..e[v] {
                    term = poly_mul(&term, &lin[v]);
                }
            }
            for (k, t) in term.into_iter().enumerate() {
                out[k] += t;
            }
        }
        out
    }
}

impl Add<&HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn add(self, rhs: &HomPoly) -> HomPoly {
        assert_eq!(self.degree, rhs.degree, "homogeneous degrees differ");
        HomPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn sub(self, rhs: &HomPoly) -> HomPoly {
        self + &(-rhs)
    }
}

impl Neg for &HomPoly {
    type Output = HomPoly;
    fn neg(self) -> HomPoly {
        self.scale(-1.0)
    }
}

impl Mul<&HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn mul(self, rhs: &HomPoly) -> HomPoly {
        let degree = self.degree + rhs.degree;
        let mut out = HomPoly::zero(degree);
        for (ea, ca) in monomials(self.degree).zip(&self.coeffs) {
            if *ca == 0.0 {
                continue;
            }
            for (eb, cb) in monomials(rhs.degree).zip(&rhs.coeffs) {
                if *cb != 0.0 {
                    out.coeffs[monomial_index(degree, ea[0] + eb[0], ea[1] + eb[1])] += ca * cb;
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<HomPoly> for HomPoly {
            type Output = HomPoly;
            fn $m(self, rhs: HomPoly) -> HomPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HomPoly> for HomPoly {
            type Output = HomPoly;
            fn $m(self, rhs: &HomPoly) -> HomPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for HomPoly {
    type Output = HomPoly;
    fn neg(self) -> HomPoly {
        -&self
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in monomials(self.degree).zip(&self.coeffs) {
            if *c == 0.0 {
                continue;
            }
            let sign = if *c < 0.0 { "-" } else { "+" };
            if first {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(v, p)| {
                    if *p == 1 {
                        format!("M{}", v + 1)
                    } else {
                        format!("M{}^{}", v + 1, p)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly[{}]({})", self.degree, self)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Horner evaluation of ascending coefficients.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of a univariate polynomial given in ascending order.
///
/// Leading coefficients below `1e-14` times the coefficient norm are dropped
/// (roots at infinity are not reported). Uses Aberth iteration followed by a
/// Newton polish against the original coefficients.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut n = coeffs.len() - 1;
    while n > 0 && coeffs[n].norm() <= 1e-14 * scale {
        n -= 1;
    }
    let p = &coeffs[..=n];
    match n {
        0 => Vec::new(),
        1 => vec![-p[0] / p[1]],
        2 => {
            let (x, y) = quadratic_roots(p[2], p[1] / 2.0, p[0]);
            vec![x, y]
        }
        _ => aberth(p),
    }
}

/// Roots of `a s^2 + 2 b s + c`, computed without cancellation.
/// The caller guarantees `a != 0`.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = (b * b - a * c).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc)
    } else {
        -(b - disc)
    };
    if q.norm() == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    }
    (q / a, c / q)
}

fn aberth(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..800 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let pv = horner(&monic, z[k]);
            let dv = horner(&deriv, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let w = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[k] -= step;
                worst = worst.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < 1e-16 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let dv = horner(&deriv, *zk);
            if dv.norm() == 0.0 {
                break;
            }
            let step = horner(&monic, *zk) / dv;
            if !step.is_finite() || step.norm() > 1e-6 * zk.norm().max(1.0) {
                break;
            }
            *zk -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn index_matches_enumeration_order() {
        for d in 0..7 {
            for (k, e) in monomials(d).enumerate() {
                assert_eq!(monomial_index(d, e[0], e[1]), k);
            }
            assert_eq!(monomials(d).count(), monomial_count(d));
        }
    }

    #[test]
    fn product_and_power_evaluate_consistently() {
        let m1 = HomPoly::var(0);
        let m3 = HomPoly::var(2);
        let p = &(&m1 * &m3) - &m1.pow(2);
        let q = p.pow(3);
        let x = [0.3, -1.2, 2.5];
        let pv = p.eval(x);
        assert_relative_eq!(q.eval(x), pv * pv * pv, max_relative = 1e-14);
        assert_eq!(q.degree(), 6);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let err = HomPoly::from_terms(&[([2, 0, 0], 1.0), ([0, 0, 1], 1.0)]).unwrap_err();
        assert_eq!(err, Error::NotHomogeneous);
    }

    #[test]
    fn display_is_readable() {
        let p = HomPoly::from_terms(&[([2, 0, 0], 1.0), ([0, 1, 1], -4.0)]).unwrap();
        assert_eq!(p.to_string(), "M1^2 - 4*M2*M3");
    }

    #[test]
    fn cubic_roots_of_unity() {
        let r = roots(&[c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z * z * z + 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn quartic_with_known_roots() {
        // (x-1)(x+2)(x-3)(x+0.5)
        let mut p = vec![c(1.0)];
        for r in [1.0, -2.0, 3.0, -0.5] {
            p = poly_mul(&p, &[c(-r), c(1.0)]);
        }
        let mut found: Vec<f64> = roots(&p).iter().map(|z| z.re).collect();
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in found.iter().zip([-2.0, -0.5, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_to_line_agrees_with_evaluation() {
        let p = HomPoly::from_terms(&[([3, 0, 0], 1.0), ([1, 1, 1], 2.0), ([0, 0, 3], -1.5)]).unwrap();
        let a = [c(0.2), c(1.0), c(-0.7)];
        let b = [c(1.1), c(-0.4), c(0.3)];
        let r = p.restrict_to_line(a, b);
        let s = c(0.37);
        let pt = [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
        assert!((horner(&r, s) - p.eval(pt)).norm() < 1e-13);
    }
}
