//! Dual-pencil fields as projections of billiards on constant-curvature
//! surfaces: the form-orthogonal construction of the field, congruence
//! normalization of the form, the equivalence check and the degenerate
//! pencil limit.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::billiard::{lift_to_surface, Boundary, ConicBoundary, FieldKind, SurfaceModel, TransversalField};
use crate::error::{Error, Result};
use crate::integrals::SamplingOptions;
use crate::projgeo::{adjugate, Conic, HomogeneousPoint, ProjectiveMap};
use crate::reflectors::{constant_curvature_reflection, mirror_reflection, reflect_direction};
use crate::sampling::rng;
use crate::scalar::tol;

/// The field whose line at `x` joins `x` to the form-orthogonal complement
/// of the plane over the tangent line.
pub fn a_orthogonal_field(boundary: &ConicBoundary, form: &Matrix3<f64>) -> Result<TransversalField> {
    if let Ok(alpha) = Conic::from_matrix(*form) {
        if alpha.proj_eq(boundary.conic(), tol::ALGEBRAIC) {
            return Err(Error::AlphaEqualsC);
        }
    }
    TransversalField::new(FieldKind::FormOrthogonal { form: *form }, boundary)
}

/// Direction of the form-orthogonal field at parameter `t`, computed as the
/// common kernel `(A h1) × (A h2)` of the plane `span(h1, h2)` over the
/// tangent line.
pub fn a_orthogonal_direction<B: Boundary + ?Sized>(boundary: &B, form: &Matrix3<f64>, t: f64) -> Result<[f64; 2]> {
    let x = boundary.point(t);
    let v = boundary.tangent(t);
    let h1 = Vector3::new(x[0], x[1], 1.0);
    let h2 = Vector3::new(v[0], v[1], 0.0);
    let (a1, a2) = (form * h1, form * h2);
    let gram = h1.dot(&a1) * h2.dot(&a2) - h1.dot(&a2) * h2.dot(&a1);
    let scale = form.norm().powi(2) * h1.norm_squared() * h2.norm_squared();
    if gram.abs() <= tol::POLAR_LOCUS * scale {
        return Err(Error::SelfOrthogonalTangent);
    }
    let p = a1.cross(&a2);
    let d = [p[0] - p[2] * x[0], p[1] - p[2] * x[1]];
    if d[0].hypot(d[1]) <= tol::ALGEBRAIC * p.norm() {
        return Err(Error::SingularPoint { parameter: t });
    }
    Ok(d)
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormSignature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl FormSignature {
    /// Eigenvalues below `1e-9` times the largest magnitude count as zero.
    pub fn of(form: &Matrix3<f64>) -> Self {
        Self::from_eigenvalues(&sorted_eigen(form).0)
    }

    fn from_eigenvalues(values: &[f64; 3]) -> Self {
        let threshold = tol::RANK * values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut s = Self {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for x in values {
            if x.abs() <= threshold {
                s.zero += 1;
            } else if *x > 0.0 {
                s.positive += 1;
            } else {
                s.negative += 1;
            }
        }
        s
    }
}

/// Eigenvalues in descending order with unit eigenvectors whose largest
/// component is positive, so the decomposition is reproducible.
fn sorted_eigen(form: &Matrix3<f64>) -> ([f64; 3], [Vector3<f64>; 3]) {
    let (eigenvalues, eigenvectors) = jacobi_eigen(form);
    let mut order = [0, 1, 2];
    order.sort_by(|a, b| eigenvalues[*b].total_cmp(&eigenvalues[*a]));
    let values = order.map(|k| eigenvalues[k]);
    let vectors = order.map(|k| {
        let v: Vector3<f64> = eigenvectors.column(k).into();
        let pivot = v
            .iter()
            .copied()
            .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
        v * pivot.signum()
    });
    (values, vectors)
}

/// Cyclic Jacobi rotations. Reconstruction error stays at a few ulps, where
/// the implicit QR of `nalgebra::SymmetricEigen` loses about 1e-9 on some
/// well-conditioned 3×3 inputs.
fn jacobi_eigen(form: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let mut a = (form + form.transpose()) * 0.5;
    let mut v = Matrix3::identity();
    let scale = a.norm();
    for _ in 0..50 {
        let off = (a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2)).sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[(p, q)] == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            v *= rot;
        }
    }
    (a.diagonal(), v)
}

/// A real linear change of coordinates bringing a form to one of
/// `diag(1,1,1)`, `diag(1,1,-1)`, `diag(1,1,0)` up to a global sign.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationResult {
    /// `x ↦ T x`, with `T^T N T = sign · A`.
    pub to_normalized: ProjectiveMap,
    /// `T^-1`: columns are the rescaled eigenvectors, so `P^T A P = sign · N`.
    pub from_normalized: ProjectiveMap,
    pub model: SurfaceModel,
    pub normalized: Matrix3<f64>,
    /// `±1`: the global sign applied to the form.
    pub sign: f64,
}

impl NormalizationResult {
    /// `|T^T N T - sign A| / |A|`.
    pub fn congruence_residual(&self, form: &Matrix3<f64>) -> f64 {
        let t = self.to_normalized.matrix();
        (t.transpose() * self.normalized * t - form * self.sign).norm() / form.norm()
    }
}

pub fn normalize_form(form: &Matrix3<f64>) -> Result<NormalizationResult> {
    if form.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let (values, vectors) = sorted_eigen(form);
    let signature = FormSignature::from_eigenvalues(&values);
    let (p, n, z) = (signature.positive, signature.negative, signature.zero);
    let (model, sign) = match (p, n, z) {
        (3, 0, 0) => (SurfaceModel::Sphere, 1.0),
        (0, 3, 0) => (SurfaceModel::Sphere, -1.0),
        (2, 1, 0) => (SurfaceModel::Hyperbolic, 1.0),
        (1, 2, 0) => (SurfaceModel::Hyperbolic, -1.0),
        (2, 0, 1) => (SurfaceModel::Plane, 1.0),
        (0, 2, 1) => (SurfaceModel::Plane, -1.0),
        _ => {
            return Err(Error::UnsupportedSignature {
                positive: p,
                negative: n,
                zero: z,
            })
        }
    };
    // after the sign flip the values are ordered positives, then the odd one out
    let mut idx = [0, 1, 2];
    if sign < 0.0 {
        idx.reverse();
    }
    let threshold = tol::RANK * values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut from = Matrix3::zeros();
    let mut diag = Vector3::zeros();
    for (col, k) in idx.iter().enumerate() {
        let lambda = values[*k] * sign;
        let scale = if lambda.abs() > threshold {
            1.0 / lambda.abs().sqrt()
        } else {
            1.0
        };
        from.set_column(col, &(vectors[*k] * scale));
        diag[col] = if lambda.abs() > threshold { lambda.signum() } else { 0.0 };
    }
    let from_normalized = ProjectiveMap::new(from)?;
    Ok(NormalizationResult {
        to_normalized: from_normalized.inverse(),
        from_normalized,
        model,
        normalized: Matrix3::from_diagonal(&diag),
        sign,
    })
}

/// Largest angle discrepancy between the field reflection and the surface
/// reflection, over sampled events.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub model: SurfaceModel,
    /// Per-event discrepancies in sampling order.
    pub discrepancies: Vec<f64>,
    pub samples: usize,
    pub skipped: usize,
    pub max_discrepancy: f64,
    pub tolerance: f64,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.samples > 0 && self.max_discrepancy < self.tolerance
    }
}

const ARC_SCAN: usize = 2048;

/// Parameters whose points lift to the model surface: for the hyperbolic
/// model, the arcs inside the absolute.
fn liftable_parameters(boundary: &ConicBoundary, norm: &NormalizationResult) -> Vec<(f64, f64)> {
    let (lo, hi) = boundary.domain();
    let inside = |t: f64| {
        let p = boundary.point(t);
        let x = norm.to_normalized.matrix() * Vector3::new(p[0], p[1], 1.0);
        x.dot(&(norm.normalized * x)) < 0.0
    };
    if norm.model != SurfaceModel::Hyperbolic {
        return vec![(lo, hi)];
    }
    let h = (hi - lo) / ARC_SCAN as f64;
    let mut arcs = Vec::new();
    let mut start: Option<f64> = None;
    for k in 0..=ARC_SCAN {
        let t = lo + k as f64 * h;
        match (inside(t), start) {
            (true, None) => start = Some(t),
            (false, Some(s)) => {
                arcs.push((s, t - h));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        arcs.push((s, hi));
    }
    arcs.retain(|(a, b)| b > a);
    arcs
}

fn line_direction(l: &Vector3<f64>) -> [f64; 2] {
    [l[1], -l[0]]
}

fn sine_between(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] * b[1] - a[1] * b[0]).abs() / (a[0].hypot(a[1]) * b[0].hypot(b[1]))
}

/// Compares the projective reflection by `field` with the reflection on the
/// surface model of `form`, transported through the normalizing coordinates.
/// The discrepancy is the sine of the angle between the two outgoing lines.
pub fn equivalence_check(
    boundary: &ConicBoundary,
    field: &TransversalField,
    form: &Matrix3<f64>,
    options: &SamplingOptions,
) -> Result<EquivalenceReport> {
    let norm = normalize_form(form)?;
    let arcs = liftable_parameters(boundary, &norm);
    let total: f64 = arcs.iter().map(|(a, b)| b - a).sum();
    if arcs.is_empty() || total <= 0.0 {
        return Err(Error::LiftDomainEmpty);
    }
    let to = *norm.to_normalized.matrix();
    let from = *norm.from_normalized.matrix();
    let mut rng = rng(options.seed);
    let mut report = EquivalenceReport {
        model: norm.model,
        discrepancies: Vec::new(),
        samples: 0,
        skipped: 0,
        max_discrepancy: 0.0,
        tolerance: options.tolerance,
    };
    let mut attempts = 0;
    while report.samples < options.samples && attempts < 10 * options.samples {
        attempts += 1;
        let mut s = rng.gen_range(0.0..total);
        let t = arcs
            .iter()
            .find_map(|(a, b)| {
                if s <= b - a {
                    Some(a + s)
                } else {
                    s -= b - a;
                    None
                }
            })
            .unwrap_or(arcs[0].0);
        let angle = rng.gen_range(0.0..std::f64::consts::PI);
        if field.near_excluded(boundary, t, options.exclusion).is_some() {
            continue;
        }
        let u = [angle.cos(), angle.sin()];
        let event = (|| -> Result<f64> {
            let x = boundary.point(t);
            let v = boundary.tangent(t);
            let expected = reflect_direction(v, field.direction(boundary, t)?, u);
            let base = to * Vector3::new(x[0], x[1], 1.0);
            let along = to * Vector3::new(v[0], v[1], 0.0);
            let incoming = to * Vector3::new(u[0], u[1], 0.0);
            let (y, w) = match norm.model {
                SurfaceModel::Plane => planar_reflection(&base, &along, &incoming)?,
                model => {
                    let y = lift_to_surface(model, &HomogeneousPoint::from_vector(base))?;
                    let ny = norm.normalized * y;
                    let tangent_part = |z: Vector3<f64>| z - y * (ny.dot(&z) / ny.dot(&y));
                    let w = constant_curvature_reflection(&norm.normalized, &y, &along, &tangent_part(incoming))?;
                    (y, w)
                }
            };
            let line = (from * y).cross(&(from * w));
            Ok(sine_between(line_direction(&line), expected))
        })();
        match event {
            Ok(d) => {
                report.samples += 1;
                report.discrepancies.push(d);
                report.max_discrepancy = report.max_discrepancy.max(d);
            }
            Err(_) => report.skipped += 1,
        }
    }
    Ok(report)
}

/// Euclidean mirror law in the chart of the normalized coordinates.
fn planar_reflection(
    base: &Vector3<f64>,
    along: &Vector3<f64>,
    incoming: &Vector3<f64>,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    if base[2].abs() <= f64::EPSILON * base.norm() {
        return Err(Error::OutsideDomain);
    }
    let p = [base[0] / base[2], base[1] / base[2]];
    let chart_velocity = |q: &Vector3<f64>| {
        [
            (q[0] * base[2] - base[0] * q[2]) / (base[2] * base[2]),
            (q[1] * base[2] - base[1] * q[2]) / (base[2] * base[2]),
        ]
    };
    let w = mirror_reflection(chart_velocity(along), chart_velocity(incoming))?;
    Ok((
        Vector3::new(p[0], p[1], 1.0),
        Vector3::new(p[0] + w[0], p[1] + w[1], 1.0),
    ))
}

/// Default step sequence for [`degenerate_pencil_limit`].
pub const LIMIT_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn rescaled_adjugate(upper: &Matrix3<f64>, lower: &Matrix3<f64>, lambda: f64) -> Matrix3<f64> {
    let adj = adjugate(&(upper - lower * lambda));
    let pivot = adj
        .iter()
        .copied()
        .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
    adj / pivot
}

/// Projective limit of `adj(U - λA)` as `λ → λ0` where `U - λ0 A` has rank one.
///
/// Symmetric differences at `λ0 ± h` cancel the odd terms; Richardson
/// extrapolation across consecutive steps removes the `h^2` term.
/// Convergence is declared when the last two extrapolants agree to `1e-7`.
pub fn degenerate_pencil_limit(
    upper: &Matrix3<f64>,
    lower: &Matrix3<f64>,
    lambda0: f64,
    steps: &[f64],
) -> Result<Matrix3<f64>> {
    let at = upper - lower * lambda0;
    let sv = at.singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|s| **s > tol::RANK * top).count();
    if rank != 1 {
        return Err(Error::RankMismatch { rank });
    }
    if steps.len() < 3 {
        return Err(Error::NoConvergence);
    }
    let symmetric: Vec<Matrix3<f64>> = steps
        .iter()
        .map(|h| {
            let plus = rescaled_adjugate(upper, lower, lambda0 + h);
            let minus = rescaled_adjugate(upper, lower, lambda0 - h);
            // both branches are normalized by their own pivot; align the signs
            let minus = if (plus - minus).norm() > (plus + minus).norm() {
                -minus
            } else {
                minus
            };
            (plus + minus) * 0.5
        })
        .collect();
    let extrapolated: Vec<Matrix3<f64>> = symmetric
        .windows(2)
        .zip(steps.windows(2))
        .map(|(s, h)| {
            let r = (h[0] / h[1]).powi(2);
            (s[1] * r - s[0]) / (r - 1.0)
        })
        .collect();
    let n = extrapolated.len();
    let last = extrapolated[n - 1];
    if !last.iter().all(|x| x.is_finite()) || (last - extrapolated[n - 2]).amax() >= 1e-7 || last.amax() < 0.5 {
        return Err(Error::NoConvergence);
    }
    Ok((last + last.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        let s = FormSignature::of(&Matrix3::from_diagonal(&Vector3::new(2.0, -1.0, 0.0)));
        assert_eq!(
            s,
            FormSignature {
                positive: 1,
                negative: 1,
                zero: 1
            }
        );
    }

    #[test]
    fn identity_is_spherical() {
        let r = normalize_form(&Matrix3::identity()).unwrap();
        assert_eq!(r.model, SurfaceModel::Sphere);
        assert!((r.from_normalized.matrix() - Matrix3::identity()).norm() < 1e-15);
    }

    #[test]
    fn scaled_lorentz_form() {
        let a = Matrix3::from_diagonal(&Vector3::new(4.0, 4.0, -1.0));
        let r = normalize_form(&a).unwrap();
        assert_eq!(r.model, SurfaceModel::Hyperbolic);
        assert_eq!(r.normalized, Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)));
        // the rescaled eigenvectors form diag(1/2, 1/2, 1), up to the order of the equal pair
        let p = r.from_normalized.matrix();
        let cols: Vec<f64> = (0..3).map(|k| p.column(k).norm()).collect();
        assert!((cols[0] - 0.5).abs() < 1e-15 && (cols[1] - 0.5).abs() < 1e-15 && (cols[2] - 1.0).abs() < 1e-15);
        assert!((p[(2, 2)] - 1.0).abs() < 1e-15);
        assert!(r.congruence_residual(&a) < 1e-12);
    }

    #[test]
    fn flipped_and_degenerate_forms() {
        let r = normalize_form(&Matrix3::from_diagonal(&Vector3::new(-1.0, -3.0, 2.0))).unwrap();
        assert_eq!((r.model, r.sign), (SurfaceModel::Hyperbolic, -1.0));
        let r = normalize_form(&Matrix3::from_diagonal(&Vector3::new(2.0, 2.0, 0.0))).unwrap();
        assert_eq!(r.model, SurfaceModel::Plane);
        assert_eq!(
            normalize_form(&Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 0.0))).unwrap_err(),
            Error::UnsupportedSignature {
                positive: 1,
                negative: 1,
                zero: 1
            }
        );
    }

    #[test]
    fn concentric_limit() {
        let u = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 2.0));
        let a = Matrix3::identity();
        let l = degenerate_pencil_limit(&u, &a, 1.0, &LIMIT_STEPS).unwrap();
        assert!((l - Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0))).amax() < 1e-7);
        let scaled = degenerate_pencil_limit(&(u * 3.0), &(a * 3.0), 1.0, &LIMIT_STEPS).unwrap();
        assert!((scaled - l).amax() < 1e-9);
        assert_eq!(
            degenerate_pencil_limit(&u, &a, 0.5, &LIMIT_STEPS).unwrap_err(),
            Error::RankMismatch { rank: 3 }
        );
    }

    #[test]
    fn circle_with_degenerate_form_gives_normals() {
        let b = ConicBoundary::circle(0.0, 0.0, 1.0);
        let form = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0));
        for t in [0.0, 0.7, 2.0] {
            let d = a_orthogonal_direction(&b, &form, t).unwrap();
            let p = b.point(t);
            assert!(sine_between(d, p) < 1e-15);
        }
        assert_eq!(
            a_orthogonal_field(&b, &Conic::unit_circle().matrix().clone()).unwrap_err(),
            Error::AlphaEqualsC
        );
    }

    #[test]
    fn self_orthogonal_tangent_detected() {
        // the tangent plane at (1, 0) of the unit circle is isotropic for diag(1, 1, -1)
        let b = ConicBoundary::circle(0.0, 0.0, 1.0);
        let form = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        assert_eq!(
            a_orthogonal_direction(&b, &form, 0.0).unwrap_err(),
            Error::SelfOrthogonalTangent
        );
    }
}
