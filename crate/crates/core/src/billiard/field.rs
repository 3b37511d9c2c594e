use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;

use super::boundary::Boundary;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::poly::roots;
use crate::projgeo::{Conic, HomogeneousLine, HomogeneousPoint};
use crate::scalar::{tol, Real};

/// The seven rigid integrable projective billiards on the parabola `x2 = x1^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExoticCase {
    A1 { n: u32 },
    A2 { n: u32 },
    B1,
    B2,
    C1,
    C2,
    D,
}

impl ExoticCase {
    pub const TAGS: [&'static str; 7] = ["2a1", "2a2", "2b1", "2b2", "2c1", "2c2", "2d"];

    /// Parses a tag such as `2c1`; `n` is required (and must be `>= 1`) for
    /// the two `2a` families and ignored otherwise.
    pub fn parse(tag: &str, n: Option<u32>) -> Result<Self> {
        let need_n = || match n {
            Some(n) if n >= 1 => Ok(n),
            Some(n) => Err(Error::InvalidCase(format!("{tag} needs N >= 1, got {n}"))),
            None => Err(Error::InvalidCase(format!("{tag} needs a parameter N"))),
        };
        match tag.trim().to_ascii_lowercase().as_str() {
            "2a1" => Ok(Self::A1 { n: need_n()? }),
            "2a2" => Ok(Self::A2 { n: need_n()? }),
            "2b1" => Ok(Self::B1),
            "2b2" => Ok(Self::B2),
            "2c1" => Ok(Self::C1),
            "2c2" => Ok(Self::C2),
            "2d" => Ok(Self::D),
            other => Err(Error::InvalidCase(format!("unknown case tag {other:?}"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::A1 { .. } => "2a1",
            Self::A2 { .. } => "2a2",
            Self::B1 => "2b1",
            Self::B2 => "2b2",
            Self::C1 => "2c1",
            Self::C2 => "2c2",
            Self::D => "2d",
        }
    }

    pub fn n(&self) -> Option<u32> {
        match self {
            Self::A1 { n } | Self::A2 { n } => Some(*n),
            _ => None,
        }
    }

    /// The constant first component of the `2a` fields, as an exact quotient.
    fn rho<R: Real>(&self) -> R {
        match self {
            Self::A1 { n } => R::from(2.0) - R::from(2.0) / R::from(f64::from(2 * n + 1)),
            Self::A2 { n } => R::from(2.0) - R::from(1.0) / R::from(f64::from(n + 1)),
            _ => unreachable!("rho is defined for the 2a cases only"),
        }
    }

    /// The case's vector field at the affine point `(x1, x2)`.
    pub fn vector_field<R: Real>(&self, x: [R; 2]) -> [R; 2] {
        let c = |v: f64| R::from(v);
        let [x1, x2] = x;
        match self {
            Self::A1 { .. } | Self::A2 { .. } => {
                let rho: R = self.rho();
                [rho, c(2.0) * (rho - c(2.0)) * x1]
            }
            Self::B1 => [c(5.0) * x1 + c(3.0), c(2.0) * (x2 - x1)],
            Self::B2 => [c(3.0) * x1, c(2.0) * x2 - c(4.0)],
            Self::C1 => [x2, x1 * x2 - c(1.0)],
            Self::C2 => [c(2.0) * x1 + c(1.0), x2 - x1],
            Self::D => [c(7.0) * x1 + c(4.0), c(2.0) * x2 - c(4.0) * x1],
        }
    }

    /// Coefficients (ascending in `x1`) of `2 x1 f1 - f2` along the parabola:
    /// it vanishes exactly where the field is tangent.
    pub fn tangency_polynomial(&self) -> Vec<f64> {
        // degree <= 3 on the parabola; interpolate at five integer nodes
        let nodes: Vec<f64> = (-2..=2).map(f64::from).collect();
        let k = nodes.len();
        let vander = DMatrix::from_fn(k, k, |i, j| nodes[i].powi(j as i32));
        let values = DVector::from_iterator(
            k,
            nodes.iter().map(|&t| {
                let f = self.vector_field([t, t * t]);
                2.0 * t * f[0] - f[1]
            }),
        );
        let coeffs = vander.lu().solve(&values).expect("Vandermonde on distinct nodes");
        // the fields have small rational data: snap interpolation noise
        coeffs.iter().map(|c| (c * 1e9).round() / 1e9).collect()
    }
}

impl fmt::Display for ExoticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n() {
            Some(n) => write!(f, "{} (N = {n})", self.tag()),
            None => write!(f, "{}", self.tag()),
        }
    }
}

impl FromStr for ExoticCase {
    type Err = Error;
    /// Accepts `2b2` or `2a1:3` (tag and `N`).
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((tag, n)) => {
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidCase(format!("bad N in {s:?}")))?;
                Self::parse(tag, Some(n))
            }
            None => Self::parse(s, None),
        }
    }
}

/// Points of the parabola where the case's field is tangent: the finite
/// complex solutions, plus the point at infinity `E = [0:1:0]` when the
/// tangency cubic drops degree (a root of the binary cubic at infinity).
pub fn exotic_tangency_locus(case: ExoticCase) -> Vec<HomogeneousPoint<Complex64>> {
    let coeffs = case.tangency_polynomial();
    let at_infinity = coeffs[3] == 0.0;
    let poly: Vec<Complex64> = coeffs.into_iter().map(|c| Complex64::new(c, 0.0)).collect();
    let mut xs = roots(&poly);
    xs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite roots"));
    let one = Complex64::new(1.0, 0.0);
    let mut out: Vec<HomogeneousPoint<Complex64>> =
        xs.into_iter().map(|x| HomogeneousPoint::new(x, x * x, one)).collect();
    if at_infinity {
        out.push(HomogeneousPoint::new(
            Complex64::new(0.0, 0.0),
            one,
            Complex64::new(0.0, 0.0),
        ));
    }
    out
}

/// The line field's kind.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    /// Euclidean normals: the usual billiard.
    Normal,
    /// Join of `x` with the pole of the tangent line at `x` w.r.t. the companion conic.
    DualPencil { companion: Conic },
    /// One of the rigid fields on the parabola.
    Exotic(ExoticCase),
    /// Join of `x` with `adj(A) T_x`, the form-normal of the plane over the
    /// tangent line; `A` may be degenerate.
    FormOrthogonal { form: Matrix3<f64> },
}

/// A transversal line field on a boundary together with its singular
/// parameters (where the field is tangent or undefined).
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalField {
    kind: FieldKind,
    excluded: Vec<f64>,
}

const SCAN_POINTS: usize = 4096;

impl TransversalField {
    /// Builds the field and locates its real singular parameters on the
    /// boundary's sampling domain.
    pub fn new<B: Boundary + ?Sized>(kind: FieldKind, boundary: &B) -> Result<Self> {
        if let FieldKind::Exotic(case) = &kind {
            if !boundary.as_conic().is_some_and(|c| c.is_parabola()) {
                return Err(Error::UnsupportedConic);
            }
            let poly: Vec<Complex64> = case
                .tangency_polynomial()
                .into_iter()
                .map(|c| Complex64::new(c, 0.0))
                .collect();
            let mut excluded: Vec<f64> = roots(&poly)
                .into_iter()
                .filter(|z| z.im.abs() <= tol::REAL_IMAG * z.norm().max(1.0))
                .map(|z| z.re)
                .collect();
            excluded.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            return Ok(Self { kind, excluded });
        }
        let mut field = Self {
            kind,
            excluded: Vec::new(),
        };
        field.excluded = field.scan_singular(boundary);
        Ok(field)
    }

    pub fn normal<B: Boundary + ?Sized>(boundary: &B) -> Self {
        Self::new(FieldKind::Normal, boundary).expect("normal field exists on any boundary")
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn excluded(&self) -> &[f64] {
        &self.excluded
    }

    /// `sin` of the angle between tangent and field, or `None` where undefined.
    fn transversality<B: Boundary + ?Sized>(&self, boundary: &B, t: f64) -> Option<f64> {
        let v = boundary.tangent(t);
        let n = self.direction_raw(boundary, t)?;
        let norm = v[0].hypot(v[1]) * n[0].hypot(n[1]);
        (norm > 0.0).then(|| (v[0] * n[1] - v[1] * n[0]) / norm)
    }

    fn scan_singular<B: Boundary + ?Sized>(&self, boundary: &B) -> Vec<f64> {
        if self.kind == FieldKind::Normal {
            return Vec::new();
        }
        let (lo, hi) = boundary.domain();
        let h = (hi - lo) / SCAN_POINTS as f64;
        let g = |t: f64| self.transversality(boundary, t).unwrap_or(0.0);
        let samples: Vec<f64> = (0..=SCAN_POINTS).map(|k| g(lo + k as f64 * h)).collect();
        let mut found = Vec::new();
        for k in 0..SCAN_POINTS {
            let (a, b) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
            if samples[k] == 0.0 {
                found.push(a);
            } else if samples[k] * samples[k + 1] < 0.0 {
                found.push(bisect(&g, a, b));
            } else if k > 0
                && samples[k].abs() < 1e-3
                && samples[k].abs() <= samples[k - 1].abs()
                && samples[k].abs() <= samples[k + 1].abs()
            {
                // touching zero without a sign change
                let t = golden_min(&|t| g(t).abs(), a - h, b);
                if g(t).abs() < 1e-9 {
                    found.push(t);
                }
            }
        }
        found.dedup_by(|a, b| (*a - *b).abs() < 2.0 * h);
        found
    }

    /// Field direction at parameter `t`, without checking the excluded set.
    fn direction_raw<B: Boundary + ?Sized>(&self, boundary: &B, t: f64) -> Option<[f64; 2]> {
        let x = boundary.point(t);
        let v = boundary.tangent(t);
        let d = self.direction_generic(x, v);
        (d[0] != 0.0 || d[1] != 0.0).then_some(d)
    }

    /// Field direction at the boundary point `x` with tangent `v`, in any real type.
    pub fn direction_generic<R: Real>(&self, x: [R; 2], v: [R; 2]) -> [R; 2] {
        let zero = R::from(0.0);
        let join_direction = |m: &Matrix3<f64>| {
            // tangent line l = (x,1) × (v,0), target point p = m l, field line (x,1) × p
            let l = [-v[1], v[0], x[0] * v[1] - x[1] * v[0]];
            let mr = |i: usize, j: usize| R::from(m[(i, j)]);
            let p: [R; 3] = [0, 1, 2].map(|i| mr(i, 0) * l[0] + mr(i, 1) * l[1] + mr(i, 2) * l[2]);
            // direction of the line through (x, 1) and p: p_xy - p_z x
            [p[0] - p[2] * x[0], p[1] - p[2] * x[1]]
        };
        match &self.kind {
            FieldKind::Normal => [zero - v[1], v[0]],
            FieldKind::DualPencil { companion } => join_direction(&companion.adjugate()),
            FieldKind::FormOrthogonal { form } => join_direction(&crate::projgeo::adjugate(form)),
            FieldKind::Exotic(case) => case.vector_field(x),
        }
    }

    /// Direction in double-double at parameter `t`.
    pub fn direction_exact<B: Boundary + ?Sized>(&self, boundary: &B, t: f64) -> [DoubleDouble; 2] {
        self.direction_generic(boundary.point_exact(t), boundary.tangent_exact(t))
    }

    /// Nearest excluded parameter within `radius` of `t`.
    pub fn near_excluded<B: Boundary + ?Sized>(&self, boundary: &B, t: f64, radius: f64) -> Option<f64> {
        self.excluded
            .iter()
            .copied()
            .find(|e| boundary.param_distance(*e, t) < radius)
    }

    /// Field direction at parameter `t`; fails near a singular parameter.
    pub fn direction<B: Boundary + ?Sized>(&self, boundary: &B, t: f64) -> Result<[f64; 2]> {
        if let Some(parameter) = self.near_excluded(boundary, t, tol::EXCLUSION) {
            return Err(Error::SingularPoint { parameter });
        }
        self.direction_raw(boundary, t)
            .ok_or(Error::SingularPoint { parameter: t })
    }
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// The field line through the boundary point `x`.
pub fn transversal_field_eval<B: Boundary + ?Sized>(
    boundary: &B,
    field: &TransversalField,
    x: [f64; 2],
) -> Result<HomogeneousLine<f64>> {
    let residual = boundary.boundary_residual(x);
    if residual > 1e-9 {
        return Err(Error::OffBoundary { residual });
    }
    let t = boundary.param_of(x);
    let d = field.direction(boundary, t)?;
    HomogeneousLine::through(x, d)
}

/// Homogeneous vector of the field line at `x` with direction `d`.
pub(crate) fn field_line_vector<R: Real>(x: [R; 2], d: [R; 2]) -> [R; 3] {
    // (x, 1) × (d, 0)
    [R::from(0.0) - d[1], d[0], x[0] * d[1] - x[1] * d[0]]
}
