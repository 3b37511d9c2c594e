use std::f64::consts::TAU;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::projgeo::{Conic, HomogeneousPoint};

/// A parameterized table boundary in the affine chart.
pub trait Boundary {
    fn point(&self, t: f64) -> [f64; 2];

    /// Derivative of [`Self::point`]; never zero on the domain.
    fn tangent(&self, t: f64) -> [f64; 2];

    /// Parameter interval used for sampling. Closed curves are periodic over it.
    fn domain(&self) -> (f64, f64);

    fn is_closed(&self) -> bool;

    /// Parameter of a point on the curve.
    fn param_of(&self, p: [f64; 2]) -> f64;

    /// Defining function, negative on the table side.
    fn implicit(&self, p: [f64; 2]) -> f64;

    /// Residual of `p` against the curve, relative to the local gradient scale.
    fn boundary_residual(&self, p: [f64; 2]) -> f64;

    /// [`Self::point`] in double-double; exact for polynomial charts.
    fn point_exact(&self, t: f64) -> [DoubleDouble; 2] {
        let p = self.point(t);
        [p[0].into(), p[1].into()]
    }

    fn tangent_exact(&self, t: f64) -> [DoubleDouble; 2] {
        let v = self.tangent(t);
        [v[0].into(), v[1].into()]
    }

    fn as_conic(&self) -> Option<&ConicBoundary> {
        None
    }

    /// Shortest parameter distance, respecting periodicity.
    fn param_distance(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        if self.is_closed() {
            let (lo, hi) = self.domain();
            let period = hi - lo;
            let d = d % period;
            d.min(period - d)
        } else {
            d
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Chart {
    /// `center + R (a cos t, b sin t)` with `R = [axis1 axis2]`, a rotation.
    Ellipse {
        center: Vector2<f64>,
        rotation: Matrix2<f64>,
        semi_axes: [f64; 2],
    },
    /// `(t, t^2)` with a sampling window.
    Parabola { window: (f64, f64) },
}

/// A real regular conic with its chart: trigonometric for ellipses, the
/// polynomial chart `t ↦ (t, t^2)` for the parabola `x2 = x1^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicBoundary {
    conic: Conic,
    chart: Chart,
    /// `+1` or `-1` so that `interior_sign * <C x, x> < 0` on the table side.
    interior_sign: f64,
}

impl ConicBoundary {
    /// Accepts real ellipses (circles included) and the canonical parabola.
    pub fn from_conic(conic: Conic) -> Result<Self> {
        if !conic.is_regular() {
            return Err(Error::DegenerateConic);
        }
        if conic.proj_eq(&Conic::parabola(), 1e-12) {
            return Ok(Self::parabola_with_window(-2.0, 2.0));
        }
        let m = conic.matrix();
        let q = m.fixed_view::<2, 2>(0, 0).into_owned();
        let b = Vector2::new(m[(0, 2)], m[(1, 2)]);
        let c = m[(2, 2)];
        let eig = SymmetricEigen::new(q);
        let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
        if l1 * l2 <= 0.0 {
            return Err(Error::UnsupportedConic);
        }
        let qinv = q.try_inverse().ok_or(Error::UnsupportedConic)?;
        let center = -qinv * b;
        let k = b.dot(&(qinv * b)) - c;
        if k / l1 <= 0.0 {
            // empty real locus
            return Err(Error::UnsupportedConic);
        }
        let mut rotation = eig.eigenvectors;
        if rotation.determinant() < 0.0 {
            rotation.set_column(1, &(-rotation.column(1)));
        }
        let semi_axes = [(k / l1).sqrt(), (k / l2).sqrt()];
        let center_value = -k;
        Ok(Self {
            conic,
            chart: Chart::Ellipse {
                center,
                rotation,
                semi_axes,
            },
            interior_sign: if center_value < 0.0 { 1.0 } else { -1.0 },
        })
    }

    /// `x^2 / a^2 + y^2 / b^2 = 1`.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::from_conic(Conic::ellipse(a, b)).expect("positive semi-axes")
    }

    pub fn circle(cx: f64, cy: f64, r: f64) -> Self {
        Self::from_conic(Conic::circle(cx, cy, r)).expect("positive radius")
    }

    /// The parabola `x2 = x1^2`, sampled over `x1 ∈ [-2, 2]`.
    pub fn parabola() -> Self {
        Self::parabola_with_window(-2.0, 2.0)
    }

    pub fn parabola_with_window(lo: f64, hi: f64) -> Self {
        Self {
            conic: Conic::parabola(),
            chart: Chart::Parabola { window: (lo, hi) },
            interior_sign: 1.0,
        }
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn is_parabola(&self) -> bool {
        matches!(self.chart, Chart::Parabola { .. })
    }

    /// Signed distances `s` with `<C (p + s d), p + s d> = 0`, ascending.
    pub fn line_hits(&self, p: [f64; 2], d: [f64; 2]) -> Vec<f64> {
        let m = self.conic.matrix();
        let pv = nalgebra::Vector3::new(p[0], p[1], 1.0);
        let dv = nalgebra::Vector3::new(d[0], d[1], 0.0);
        let a = dv.dot(&(m * dv));
        let b = pv.dot(&(m * dv));
        let c = pv.dot(&(m * pv));
        let scale = m.norm() * (1.0 + pv.norm_squared()) * (1.0 + dv.norm_squared());
        if a.abs() <= 1e-15 * scale {
            if b.abs() <= 1e-15 * scale {
                return Vec::new();
            }
            return vec![-c / (2.0 * b)];
        }
        let disc = b * b - a * c;
        if disc < 0.0 {
            return Vec::new();
        }
        let q = -(b + b.signum() * disc.sqrt());
        let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
        roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
        roots
    }
}

impl Boundary for ConicBoundary {
    fn point(&self, t: f64) -> [f64; 2] {
        match &self.chart {
            Chart::Ellipse {
                center,
                rotation,
                semi_axes,
            } => {
                let u = rotation * Vector2::new(semi_axes[0] * t.cos(), semi_axes[1] * t.sin());
                [center[0] + u[0], center[1] + u[1]]
            }
            Chart::Parabola { .. } => [t, t * t],
        }
    }

    fn tangent(&self, t: f64) -> [f64; 2] {
        match &self.chart {
            Chart::Ellipse {
                rotation, semi_axes, ..
            } => {
                let u = rotation * Vector2::new(-semi_axes[0] * t.sin(), semi_axes[1] * t.cos());
                [u[0], u[1]]
            }
            Chart::Parabola { .. } => [1.0, 2.0 * t],
        }
    }

    fn domain(&self) -> (f64, f64) {
        match &self.chart {
            Chart::Ellipse { .. } => (0.0, TAU),
            Chart::Parabola { window } => *window,
        }
    }

    fn is_closed(&self) -> bool {
        matches!(self.chart, Chart::Ellipse { .. })
    }

    fn param_of(&self, p: [f64; 2]) -> f64 {
        match &self.chart {
            Chart::Ellipse {
                center,
                rotation,
                semi_axes,
            } => {
                let u = rotation.transpose() * (Vector2::new(p[0], p[1]) - center);
                (u[1] / semi_axes[1]).atan2(u[0] / semi_axes[0]).rem_euclid(TAU)
            }
            Chart::Parabola { .. } => p[0],
        }
    }

    fn implicit(&self, p: [f64; 2]) -> f64 {
        self.interior_sign * self.conic.eval(&HomogeneousPoint::affine(p[0], p[1]))
    }

    fn boundary_residual(&self, p: [f64; 2]) -> f64 {
        let x = HomogeneousPoint::affine(p[0], p[1]);
        let grad = self.conic.matrix() * x.vector();
        self.conic.eval(&x).abs() / (grad.norm() * x.vector().norm()).max(f64::MIN_POSITIVE)
    }

    fn point_exact(&self, t: f64) -> [DoubleDouble; 2] {
        match &self.chart {
            Chart::Parabola { .. } => {
                let x = DoubleDouble::from(t);
                [x, x * x]
            }
            Chart::Ellipse { .. } => {
                let p = self.point(t);
                [p[0].into(), p[1].into()]
            }
        }
    }

    fn tangent_exact(&self, t: f64) -> [DoubleDouble; 2] {
        match &self.chart {
            Chart::Parabola { .. } => [1.0.into(), DoubleDouble::from(2.0) * DoubleDouble::from(t)],
            Chart::Ellipse { .. } => {
                let v = self.tangent(t);
                [v[0].into(), v[1].into()]
            }
        }
    }

    fn as_conic(&self) -> Option<&ConicBoundary> {
        Some(self)
    }
}

/// The oval `(x/a)^4 + (y/b)^4 = 1` in the polar-angle chart. Not a conic;
/// used to probe checkers with a table that has no conic caustics.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticOval {
    a: f64,
    b: f64,
}

impl QuarticOval {
    pub fn new(a: f64, b: f64) -> Self {
        assert!(a > 0.0 && b > 0.0, "semi-axes must be positive");
        Self { a, b }
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        [4.0 * p[0].powi(3) / self.a.powi(4), 4.0 * p[1].powi(3) / self.b.powi(4)]
    }
}

impl Boundary for QuarticOval {
    fn point(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        let r = ((c / self.a).powi(4) + (s / self.b).powi(4)).powf(-0.25);
        [r * c, r * s]
    }

    fn tangent(&self, t: f64) -> [f64; 2] {
        let g = self.gradient(self.point(t));
        [-g[1], g[0]]
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, TAU)
    }

    fn is_closed(&self) -> bool {
        true
    }

    fn param_of(&self, p: [f64; 2]) -> f64 {
        p[1].atan2(p[0]).rem_euclid(TAU)
    }

    fn implicit(&self, p: [f64; 2]) -> f64 {
        (p[0] / self.a).powi(4) + (p[1] / self.b).powi(4) - 1.0
    }

    fn boundary_residual(&self, p: [f64; 2]) -> f64 {
        let g = self.gradient(p);
        self.implicit(p).abs() / g[0].hypot(g[1]).max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_chart_stays_on_the_conic() {
        let b = ConicBoundary::from_conic(Conic::from_coefficients([2.0, 0.3, -0.4, 1.0, 0.2, -3.0]).unwrap()).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.13;
            let p = b.point(t);
            assert!(b.boundary_residual(p) < 1e-13);
            assert!(b.param_distance(b.param_of(p), t) < 1e-12);
            // the tangent is orthogonal to the conic gradient
            let g = b.conic().matrix() * nalgebra::Vector3::new(p[0], p[1], 1.0);
            let v = b.tangent(t);
            assert!((g[0] * v[0] + g[1] * v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_is_negative() {
        let e = ConicBoundary::ellipse(2.0, 1.0);
        assert!(e.implicit([0.0, 0.0]) < 0.0 && e.implicit([3.0, 0.0]) > 0.0);
        let neg = ConicBoundary::from_conic(Conic::from_matrix(-Conic::unit_circle().matrix()).unwrap()).unwrap();
        assert!(neg.implicit([0.1, 0.1]) < 0.0);
        let p = ConicBoundary::parabola();
        assert!(p.implicit([0.0, 1.0]) < 0.0);
    }

    #[test]
    fn hyperbola_is_unsupported() {
        let h = Conic::from_coefficients([1.0, 0.0, 0.0, -1.0, 0.0, -1.0]).unwrap();
        assert_eq!(ConicBoundary::from_conic(h).unwrap_err(), Error::UnsupportedConic);
    }

    #[test]
    fn parabola_recognized_from_scaled_matrix() {
        let c = Conic::from_matrix(Conic::parabola().matrix() * -3.0).unwrap();
        assert!(ConicBoundary::from_conic(c).unwrap().is_parabola());
    }

    #[test]
    fn line_hits_on_circle() {
        let c = ConicBoundary::circle(0.0, 0.0, 1.0);
        let s = c.line_hits([-2.0, 0.0], [1.0, 0.0]);
        assert_eq!(s.len(), 2);
        assert!((s[0] - 1.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
        assert!(c.line_hits([-2.0, 2.0], [1.0, 0.0]).is_empty());
    }

    #[test]
    fn quartic_oval_chart() {
        let q = QuarticOval::new(2.0, 1.0);
        for k in 0..40 {
            let t = k as f64 * 0.157;
            let p = q.point(t);
            assert!(q.implicit(p).abs() < 1e-14);
            let h = 1e-6;
            let (a, b) = (q.point(t - h), q.point(t + h));
            let fd = [(b[0] - a[0]) / (2.0 * h), (b[1] - a[1]) / (2.0 * h)];
            let v = q.tangent(t);
            assert!((fd[0] * v[1] - fd[1] * v[0]).abs() < 1e-6 * v[0].hypot(v[1]));
        }
    }
}
