use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::projgeo::{Conic, HomogeneousPoint};
use crate::reflectors::{mirror_reflection, SpaceInvolution};

/// The three constant-curvature models that project onto the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceModel {
    /// The plane `x3 = 1` with metric `dx1^2 + dx2^2`.
    Plane,
    /// The unit sphere of the identity form.
    Sphere,
    /// The sheet `x3 > 0` of `x1^2 + x2^2 - x3^2 = -1`.
    Hyperbolic,
}

impl SurfaceModel {
    /// The form whose restriction is the metric: `diag(1,1,0)`, `I`, `diag(1,1,-1)`.
    pub fn form(&self) -> Matrix3<f64> {
        let d = match self {
            Self::Plane => Vector3::new(1.0, 1.0, 0.0),
            Self::Sphere => Vector3::new(1.0, 1.0, 1.0),
            Self::Hyperbolic => Vector3::new(1.0, 1.0, -1.0),
        };
        Matrix3::from_diagonal(&d)
    }

    /// Residual of the surface equation at `x`.
    pub fn surface_residual(&self, x: &Vector3<f64>) -> f64 {
        match self {
            Self::Plane => (x[2] - 1.0).abs(),
            Self::Sphere => (x.norm_squared() - 1.0).abs(),
            Self::Hyperbolic => (x[0] * x[0] + x[1] * x[1] - x[2] * x[2] + 1.0).abs(),
        }
    }
}

/// Lifts a point of the projective plane to the surface.
///
/// Sphere: the representative with `x3 > 0` (or the first nonzero coordinate
/// positive when `x3 = 0`). Hyperbolic: only points inside the absolute lift.
pub fn lift_to_surface(model: SurfaceModel, p: &HomogeneousPoint<f64>) -> Result<Vector3<f64>> {
    let v = p.vector();
    match model {
        SurfaceModel::Plane => {
            let a = p.to_affine().ok_or(Error::OutsideDomain)?;
            Ok(Vector3::new(a[0], a[1], 1.0))
        }
        SurfaceModel::Sphere => {
            let sign = v.iter().rev().find(|x| **x != 0.0).map_or(1.0, |x| x.signum());
            Ok(v * (sign / v.norm()))
        }
        SurfaceModel::Hyperbolic => {
            let q = v[2] * v[2] - v[0] * v[0] - v[1] * v[1];
            if q <= 1e-14 * v.norm_squared() {
                return Err(Error::OutsideDomain);
            }
            Ok(v * (v[2].signum() / q.sqrt()))
        }
    }
}

/// The tautological projection `ℝ³ ∖ 0 → ℝP²`.
pub fn project_pi(x: &Vector3<f64>) -> Result<HomogeneousPoint<f64>> {
    HomogeneousPoint::try_from_vector(*x)
}

/// A point of the surface with a tangent velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceState {
    pub point: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

/// A boundary curve on the surface: the intersection with the cone over a
/// conic. On the sphere, only the sheet with `<hemisphere, x> > 0` counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBoundary {
    model: SurfaceModel,
    cone: Conic,
    hemisphere: Vector3<f64>,
}

impl SurfaceBoundary {
    pub fn new(model: SurfaceModel, cone: Conic) -> Result<Self> {
        if !cone.is_regular() {
            return Err(Error::DegenerateConic);
        }
        Ok(Self {
            model,
            cone,
            hemisphere: Vector3::z(),
        })
    }

    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn cone(&self) -> &Conic {
        &self.cone
    }

    /// Covector of the tangent plane `H_C` of the cone at `x`.
    pub fn tangent_covector(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.cone.matrix() * x
    }

    /// The form-preserving reflection fixing the cone's tangent plane at `x`.
    pub fn involution_at(&self, x: &Vector3<f64>) -> Result<SpaceInvolution> {
        let ell = self.tangent_covector(x);
        let (h1, h2) = crate::projgeo::pencil_basis(&ell);
        SpaceInvolution::fixing_plane(&self.model.form(), &h1, &h2)
    }
}

/// `<A v, v>` for the model's form.
pub fn form_value(model: SurfaceModel, v: &Vector3<f64>) -> f64 {
    v.dot(&(model.form() * v))
}

/// Follows the geodesic (a plane section through the origin) to the next
/// boundary hit and reflects the velocity with the involution `J` fixing the
/// cone's tangent plane there. The outgoing velocity keeps `<A v, v>`.
pub fn surface_billiard_step(boundary: &SurfaceBoundary, state: &SurfaceState) -> Result<SurfaceState> {
    let model = boundary.model;
    let speed2 = form_value(model, &state.velocity);
    if speed2 <= 0.0 {
        return Err(Error::ZeroVelocity);
    }
    if model == SurfaceModel::Plane {
        return plane_step(boundary, state);
    }
    let x = state.point;
    let u = state.velocity / speed2.sqrt();
    let c = boundary.cone.matrix();
    let (cxx, cxu, cuu) = (x.dot(&(c * x)), x.dot(&(c * u)), u.dot(&(c * u)));
    // Y = a x + b u on the cone: cxx a^2 + 2 cxu a b + cuu b^2 = 0, ratio r = b / a
    let ratios = ratio_roots(cxx, cxu, cuu);
    let eps = 1e-9;
    let mut best: Option<f64> = None;
    for r in ratios {
        let candidates: Vec<f64> = match model {
            SurfaceModel::Sphere => {
                let base = r.atan();
                [base, base + PI, base + TAU].into_iter().collect()
            }
            SurfaceModel::Hyperbolic if r.abs() < 1.0 => vec![r.atanh()],
            _ => Vec::new(),
        };
        for theta in candidates {
            if theta <= eps {
                continue;
            }
            let y = geodesic_point(model, &x, &u, theta);
            if model == SurfaceModel::Sphere && y.dot(&boundary.hemisphere) <= 0.0 {
                continue;
            }
            if best.is_none_or(|b| theta < b) {
                best = Some(theta);
            }
        }
    }
    let theta = best.ok_or(Error::NoIntersection)?;
    let y = geodesic_point(model, &x, &u, theta);
    let dy = geodesic_velocity(model, &x, &u, theta) * speed2.sqrt();
    let j = boundary.involution_at(&y)?;
    // J fixes y only up to how well y lies on the cone; restore tangency
    let a = model.form();
    let w = j.apply(&dy);
    let ay = a * y;
    let yy = y.dot(&ay);
    Ok(SurfaceState {
        point: y / yy.abs().sqrt(),
        velocity: w - y * (ay.dot(&w) / yy),
    })
}

fn ratio_roots(cxx: f64, cxu: f64, cuu: f64) -> Vec<f64> {
    // roots r of cuu r^2 + 2 cxu r + cxx = 0; r = ±∞ means the direction u itself
    let scale = cxx.abs().max(cxu.abs()).max(cuu.abs());
    if cuu.abs() <= 1e-15 * scale {
        return if cxu.abs() > 1e-15 * scale {
            vec![-cxx / (2.0 * cxu), f64::INFINITY]
        } else {
            Vec::new()
        };
    }
    let disc = cxu * cxu - cuu * cxx;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -(cxu + cxu.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / cuu, cxx / q]
}

fn geodesic_point(model: SurfaceModel, x: &Vector3<f64>, u: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    match model {
        SurfaceModel::Hyperbolic => x * theta.cosh() + u * theta.sinh(),
        _ => x * theta.cos() + u * theta.sin(),
    }
}

fn geodesic_velocity(model: SurfaceModel, x: &Vector3<f64>, u: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    match model {
        SurfaceModel::Hyperbolic => x * theta.sinh() + u * theta.cosh(),
        _ => -x * theta.sin() + u * theta.cos(),
    }
}

fn plane_step(boundary: &SurfaceBoundary, state: &SurfaceState) -> Result<SurfaceState> {
    let table = super::boundary::ConicBoundary::from_conic(boundary.cone.clone())?;
    let p = [state.point[0] / state.point[2], state.point[1] / state.point[2]];
    let d = [state.velocity[0], state.velocity[1]];
    let eps = 1e-9 * (1.0 + p[0].hypot(p[1])) / d[0].hypot(d[1]);
    let s = table
        .line_hits(p, d)
        .into_iter()
        .filter(|s| *s > eps)
        .reduce(f64::max)
        .ok_or(Error::NoIntersection)?;
    let hit = [p[0] + s * d[0], p[1] + s * d[1]];
    let tangent = super::boundary::Boundary::tangent(&table, super::boundary::Boundary::param_of(&table, hit));
    let w = mirror_reflection(tangent, d)?;
    Ok(SurfaceState {
        point: Vector3::new(hit[0], hit[1], 1.0),
        velocity: Vector3::new(w[0], w[1], 0.0),
    })
}
