//! Reflection involutions: the Euclidean mirror, the projective billiard
//! reflection at a boundary point, the form-preserving reflection of a
//! constant-curvature surface and involutions of a line fixing a point.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projgeo::{adjugate, cross, line_conic_intersection, Conic, HomogeneousLine, HomogeneousPoint};
use crate::scalar::{tol, Real, Scalar};

fn wedge<R: Real>(a: [R; 2], b: [R; 2]) -> R {
    a[0] * b[1] - a[1] * b[0]
}

/// Euclidean mirror image of `v` across the line spanned by `tangent`.
pub fn mirror_reflection<R: Real>(tangent: [R; 2], v: [R; 2]) -> Result<[R; 2]> {
    let tt = tangent[0] * tangent[0] + tangent[1] * tangent[1];
    if tt.to_f64() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let k = R::from(2.0) * (tangent[0] * v[0] + tangent[1] * v[1]) / tt;
    Ok([k * tangent[0] - v[0], k * tangent[1] - v[1]])
}

/// The involution fixing direction `t` and negating direction `n`:
/// `v - 2 (t ∧ v) / (t ∧ n) n`. The caller guarantees `t ∧ n != 0`.
pub fn reflect_direction<R: Real>(t: [R; 2], n: [R; 2], v: [R; 2]) -> [R; 2] {
    let k = R::from(2.0) * wedge(t, v) / wedge(t, n);
    [v[0] - k * n[0], v[1] - k * n[1]]
}

/// Reflection of directions at a point `Q` of the affine chart, with
/// eigenvalue `+1` along the tangent and `-1` along the transversal.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneInvolution {
    base: [f64; 2],
    plus: [f64; 2],
    minus: [f64; 2],
    matrix: Matrix2<f64>,
}

impl PlaneInvolution {
    /// From the base point and the two eigendirections.
    pub fn from_directions(base: [f64; 2], plus: [f64; 2], minus: [f64; 2]) -> Result<Self> {
        let norm = (plus[0].hypot(plus[1])) * (minus[0].hypot(minus[1]));
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let w = wedge(plus, minus);
        if w.abs() <= tol::ALGEBRAIC * norm {
            return Err(Error::CoincidentEigenlines);
        }
        // I = Id - 2 n (t^perp)^T / (t ∧ n), with t ∧ v = (-t2, t1) . v
        let n = Vector2::new(minus[0], minus[1]);
        let tperp = Vector2::new(-plus[1], plus[0]);
        let matrix = Matrix2::identity() - n * tperp.transpose() * (2.0 / w);
        Ok(Self {
            base,
            plus,
            minus,
            matrix,
        })
    }

    pub fn base(&self) -> [f64; 2] {
        self.base
    }

    pub fn plus_direction(&self) -> [f64; 2] {
        self.plus
    }

    pub fn minus_direction(&self) -> [f64; 2] {
        self.minus
    }

    /// The exact matrix on direction vectors (eigenvalues `+1`, `-1`).
    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.matrix
    }

    /// Unit Frobenius norm, first nonzero entry positive: a canonical
    /// representative of the projective involution.
    pub fn normalized_matrix(&self) -> Matrix2<f64> {
        normalize_sign(self.matrix.unscale(self.matrix.norm()))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let w = self.matrix * Vector2::new(v[0], v[1]);
        [w[0], w[1]]
    }

    /// Same action, over any real type, recomputed from the eigendirections.
    pub fn apply_exact<R: Real>(&self, v: [R; 2]) -> [R; 2] {
        let t = [R::from(self.plus[0]), R::from(self.plus[1])];
        let n = [R::from(self.minus[0]), R::from(self.minus[1])];
        reflect_direction(t, n, v)
    }
}

fn normalize_sign<const R: usize, const C: usize>(m: nalgebra::SMatrix<f64, R, C>) -> nalgebra::SMatrix<f64, R, C> {
    // row-major scan so the convention reads naturally
    for r in 0..R {
        for c in 0..C {
            if m[(r, c)].abs() > 1e-12 {
                return if m[(r, c)] < 0.0 { -m } else { m };
            }
        }
    }
    m
}

/// Direction of an affine line `a x + b y + c = 0`, over any scalar.
fn line_direction<S: Scalar>(l: &HomogeneousLine<S>) -> [S; 2] {
    let v = l.vector();
    [v[1], -v[0]]
}

fn affine_base(q: &HomogeneousPoint<f64>) -> Result<[f64; 2]> {
    q.to_affine().ok_or(Error::OutsideDomain)
}

/// The projective billiard reflection at `q`: fixes the line `t`, and
/// its harmonic partner is the line `n`.
pub fn build_projective_involution(
    t: &HomogeneousLine<f64>,
    n: &HomogeneousLine<f64>,
    q: &HomogeneousPoint<f64>,
) -> Result<PlaneInvolution> {
    for l in [t, n] {
        let residual = l.incidence_residual(q);
        if residual > tol::ALGEBRAIC {
            return Err(Error::NotThroughPoint { residual });
        }
    }
    if t.proj_eq(n, tol::ALGEBRAIC) {
        return Err(Error::CoincidentEigenlines);
    }
    PlaneInvolution::from_directions(affine_base(q)?, line_direction(t), line_direction(n))
}

/// Image of a (possibly complex) line through the base point under the
/// projectivized involution.
pub fn reflect_line_pencil<S: Scalar>(inv: &PlaneInvolution, l: &HomogeneousLine<S>) -> Result<HomogeneousLine<S>> {
    let q = Vector3::new(S::from_real(inv.base[0]), S::from_real(inv.base[1]), S::one());
    let residual = l.vector().dot(&q).modulus() / (l.vector().norm() * q.norm());
    if residual > tol::ALGEBRAIC {
        return Err(Error::NotThroughPoint { residual });
    }
    let d = line_direction(l);
    let m = inv.matrix.map(S::from_real);
    let w = [m[(0, 0)] * d[0] + m[(0, 1)] * d[1], m[(1, 0)] * d[0] + m[(1, 1)] * d[1]];
    HomogeneousLine::try_from_vector(cross(&q, &Vector3::new(w[0], w[1], S::zero())))
}

/// A linear involution of ℝ³ fixing a 2-plane pointwise and preserving a
/// quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceInvolution {
    matrix: Matrix3<f64>,
    form: Matrix3<f64>,
    normal: Vector3<f64>,
}

fn relative_norm_check(form: &Matrix3<f64>, n: &Vector3<f64>) -> Result<f64> {
    let q = n.dot(&(form * n));
    let scale = form.norm() * n.norm_squared();
    if scale == 0.0 || q.abs() <= 1e-12 * scale {
        return Err(Error::DegenerateRestriction);
    }
    Ok(q)
}

impl SpaceInvolution {
    /// `J = Id - 2 n (A n)^T / <A n, n>` with `n = adj(A) (h1 × h2)` the
    /// form-normal of the plane spanned by `h1`, `h2`.
    pub fn fixing_plane(form: &Matrix3<f64>, h1: &Vector3<f64>, h2: &Vector3<f64>) -> Result<Self> {
        let covector = h1.cross(h2);
        if covector.norm() <= 1e-14 * h1.norm() * h2.norm() {
            return Err(Error::ZeroVector);
        }
        let normal = adjugate(form) * covector;
        let q = relative_norm_check(form, &normal)?;
        let matrix = Matrix3::identity() - normal * (form * normal).transpose() * (2.0 / q);
        Ok(Self {
            matrix,
            form: *form,
            normal,
        })
    }

    /// Independent construction: `V diag(1, 1, -1) V^-1` with `V = [h1, h2, n]`
    /// and `n` the kernel of `v ↦ (<A h1, v>, <A h2, v>)`.
    pub fn from_eigenbasis(form: &Matrix3<f64>, h1: &Vector3<f64>, h2: &Vector3<f64>) -> Result<Self> {
        let normal = (form * h1).cross(&(form * h2));
        relative_norm_check(form, &normal)?;
        let v = Matrix3::from_columns(&[*h1, *h2, normal]);
        let inv = v.try_inverse().ok_or(Error::DegenerateRestriction)?;
        let matrix = v * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)) * inv;
        Ok(Self {
            matrix,
            form: *form,
            normal,
        })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn form(&self) -> &Matrix3<f64> {
        &self.form
    }

    /// The negated direction.
    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    /// `|J^T A J - A| / |A|`.
    pub fn isometry_residual(&self) -> f64 {
        (self.matrix.transpose() * self.form * self.matrix - self.form).norm() / self.form.norm()
    }
}

/// Reflects `v` in the plane spanned by `h1`, `h2`, isometrically for `form`.
pub fn constant_curvature_reflection(
    form: &Matrix3<f64>,
    h1: &Vector3<f64>,
    h2: &Vector3<f64>,
    v: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    Ok(SpaceInvolution::fixing_plane(form, h1, h2)?.apply(v))
}

/// The involution of a line fixing a point `P` on it and swapping a pair of
/// points `X1`, `X2` (possibly complex conjugate). Its second fixed point is
/// the harmonic conjugate of `P` with respect to the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LineInvolution {
    line: HomogeneousLine<f64>,
    fixed: Vector3<f64>,
    other_fixed: Vector3<f64>,
}

fn decompose_complex(a: &Vector3<Complex64>, b: &Vector3<Complex64>, c: &Vector3<Complex64>) -> (Complex64, Complex64) {
    let mut best = (0, 1);
    let mut best_det = Complex64::new(0.0, 0.0);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = a[i] * b[j] - a[j] * b[i];
        if d.norm() > best_det.norm() {
            best = (i, j);
            best_det = d;
        }
    }
    let (i, j) = best;
    (
        (c[i] * b[j] - c[j] * b[i]) / best_det,
        (a[i] * c[j] - a[j] * c[i]) / best_det,
    )
}

impl LineInvolution {
    /// The involution `s P + t P' ↦ s P - t P'` with both fixed points given.
    pub fn from_fixed_points(
        line: HomogeneousLine<f64>,
        fixed: Vector3<f64>,
        other_fixed: Vector3<f64>,
    ) -> Result<Self> {
        let (p, q) = (fixed.normalize(), other_fixed.normalize());
        if p.cross(&q).norm() <= tol::ALGEBRAIC {
            return Err(Error::CoincidentEigenlines);
        }
        for v in [&p, &q] {
            let residual = line.vector().normalize().dot(v).abs();
            if residual > tol::ALGEBRAIC {
                return Err(Error::NotThroughPoint { residual });
            }
        }
        Ok(Self {
            line,
            fixed: p,
            other_fixed: q,
        })
    }

    pub fn line(&self) -> &HomogeneousLine<f64> {
        &self.line
    }

    pub fn fixed_point(&self) -> HomogeneousPoint<f64> {
        HomogeneousPoint::from_vector(self.fixed)
    }

    pub fn other_fixed_point(&self) -> HomogeneousPoint<f64> {
        HomogeneousPoint::from_vector(self.other_fixed)
    }

    /// The 2×2 matrix in the basis `(P, P')` normalized as for
    /// [`PlaneInvolution::normalized_matrix`], expressed in the line's
    /// standard parameterization `mu b1 + nu b2`.
    pub fn matrix(&self) -> Matrix2<f64> {
        let (b1, b2) = crate::projgeo::pencil_basis(&self.line.vector());
        let coords = |v: &Vector3<f64>| {
            let (s, t) = decompose_complex(&b1.map(Into::into), &b2.map(Into::into), &v.map(Into::into));
            Vector2::new(s.re, t.re)
        };
        let basis = Matrix2::from_columns(&[coords(&self.fixed), coords(&self.other_fixed)]);
        let inv = basis.try_inverse().expect("fixed points are distinct");
        let m = basis * Matrix2::new(1.0, 0.0, 0.0, -1.0) * inv;
        normalize_sign(m.unscale(m.norm()))
    }

    /// Applies the involution to a (possibly complex) point of the line.
    pub fn apply<S: Scalar>(&self, x: &HomogeneousPoint<S>) -> Result<HomogeneousPoint<S>> {
        let residual = self.line.to_complex().incidence_residual(&x.to_complex());
        if residual > tol::ALGEBRAIC {
            return Err(Error::NotThroughPoint { residual });
        }
        let p = self.fixed.map(S::from_real);
        let q = self.other_fixed.map(S::from_real);
        let xv = x.vector();
        let mut best = (0, 1);
        let mut best_det = S::zero();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = p[i] * q[j] - p[j] * q[i];
            if d.modulus() > best_det.modulus() {
                best = (i, j);
                best_det = d;
            }
        }
        let (i, j) = best;
        let s = (xv[i] * q[j] - xv[j] * q[i]) / best_det;
        let t = (p[i] * xv[j] - p[j] * xv[i]) / best_det;
        HomogeneousPoint::try_from_vector(p * s - q * t)
    }
}

/// The unique involution of `line` fixing `p` and swapping the two points of
/// `line ∩ conic`.
pub fn line_involution_fixing_point(
    p: &HomogeneousPoint<f64>,
    line: &HomogeneousLine<f64>,
    conic: &Conic<f64>,
) -> Result<LineInvolution> {
    let residual = line.incidence_residual(p);
    if residual > tol::ALGEBRAIC {
        return Err(Error::NotThroughPoint { residual });
    }
    let [x1, x2] = line_conic_intersection(line, conic)?;
    let (u1, u2) = (x1.unit(), x2.unit());
    if crate::projgeo::minor_residual(u1.as_slice(), u2.as_slice()) < tol::TANGENT_SEPARATION {
        return Err(Error::TangentLine);
    }
    let pc = p.to_complex();
    if pc.proj_eq(&x1, tol::TANGENT_SEPARATION) || pc.proj_eq(&x2, tol::TANGENT_SEPARATION) {
        return Err(Error::BasePoint);
    }
    let (alpha, beta) = decompose_complex(&u1, &u2, &pc.unit());
    let other = HomogeneousPoint::try_from_vector(u1 * alpha - u2 * beta)?;
    let other = other.to_real(tol::REAL_IMAG).ok_or(Error::NonReal)?;
    LineInvolution::from_fixed_points(*line, p.vector(), other.vector())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_mirror() {
        assert_eq!(mirror_reflection([1.0, 0.0], [1.0, 1.0]).unwrap(), [1.0, -1.0]);
        assert_eq!(mirror_reflection([1.0, 0.0], [2.0, 0.0]).unwrap(), [2.0, 0.0]);
        assert_eq!(
            mirror_reflection([0.0, 0.0], [1.0, 0.0]).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn mirror_across_slanted_tangent() {
        // Householder oracle: w = v - 2 (v.n) n with unit normal n = (2, -1)/sqrt5
        let w = mirror_reflection([1.0, 2.0], [0.0, 1.0]).unwrap();
        let n = [2.0 / 5f64.sqrt(), -1.0 / 5f64.sqrt()];
        let d = n[1];
        let expect = [-2.0 * d * n[0], 1.0 - 2.0 * d * n[1]];
        assert!((w[0] - expect[0]).abs() < 1e-15 && (w[1] - expect[1]).abs() < 1e-15);
        assert!((w[0] - 0.8).abs() < 1e-15 && (w[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_eigenlines_give_the_mirror() {
        let q = HomogeneousPoint::affine(0.0, 0.0);
        let t = HomogeneousLine::affine(0.0, 1.0, 0.0);
        let n = HomogeneousLine::affine(1.0, 0.0, 0.0);
        let inv = build_projective_involution(&t, &n, &q).unwrap();
        assert!((inv.matrix() - Matrix2::new(1.0, 0.0, 0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn oblique_eigenlines_by_decomposition() {
        let inv = PlaneInvolution::from_directions([0.0, 0.0], [1.0, 0.0], [1.0, 1.0]).unwrap();
        // (0, 1) = -1 (1, 0) + 1 (1, 1); flip the second component: (-1, 0) - (1, 1)
        let w = inv.apply([0.0, 1.0]);
        assert!((w[0] + 2.0).abs() < 1e-15 && (w[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn coincident_eigenlines_rejected() {
        let err = PlaneInvolution::from_directions([0.0, 0.0], [1.0, 2.0], [-2.0, -4.0]).unwrap_err();
        assert_eq!(err, Error::CoincidentEigenlines);
    }

    #[test]
    fn normalized_matrix_is_canonical() {
        let inv = PlaneInvolution::from_directions([0.0, 0.0], [1.0, 0.0], [1.0, 1.0]).unwrap();
        let m = inv.normalized_matrix();
        assert!((m.norm() - 1.0).abs() < 1e-15);
        assert!(m[(0, 0)] > 0.0);
    }

    #[test]
    fn pencil_mirror_flips_slope() {
        let inv = PlaneInvolution::from_directions([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap();
        let l = HomogeneousLine::affine(0.7, -1.0, 0.0);
        let r = reflect_line_pencil(&inv, &l).unwrap();
        assert!(r.proj_eq(&HomogeneousLine::affine(-0.7, -1.0, 0.0), 1e-15));
        let t = HomogeneousLine::affine(0.0, 1.0, 0.0);
        assert!(reflect_line_pencil(&inv, &t).unwrap().proj_eq(&t, 1e-15));
        let off = HomogeneousLine::affine(1.0, 1.0, 1.0);
        assert!(matches!(
            reflect_line_pencil(&inv, &off),
            Err(Error::NotThroughPoint { .. })
        ));
    }

    #[test]
    fn equatorial_mirror_on_the_sphere() {
        let v = constant_curvature_reflection(
            &Matrix3::identity(),
            &Vector3::x(),
            &Vector3::y(),
            &Vector3::new(1.0, 2.0, 3.0),
        )
        .unwrap();
        assert_eq!(v, Vector3::new(1.0, 2.0, -3.0));
    }

    #[test]
    fn minkowski_coordinate_plane() {
        let form = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        let v = constant_curvature_reflection(&form, &Vector3::x(), &Vector3::z(), &Vector3::y()).unwrap();
        assert!((v - Vector3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn isotropic_plane_rejected() {
        // the plane x1 = x3 is tangent to the light cone of diag(1, 1, -1)
        let form = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        let err = SpaceInvolution::fixing_plane(&form, &Vector3::new(1.0, 0.0, 1.0), &Vector3::y()).unwrap_err();
        assert_eq!(err, Error::DegenerateRestriction);
    }

    #[test]
    fn angular_symmetry_on_the_absolute() {
        let p = HomogeneousPoint::new(1.0, 0.0, 1.0);
        let l = HomogeneousLine::new(1.0, 0.0, -1.0);
        let inv = line_involution_fixing_point(&p, &l, &Conic::isotropic()).unwrap();
        // chart M2 = t on the line M1 = M3: t ↦ -t
        let x = HomogeneousPoint::new(1.0, 0.4, 1.0);
        let y = inv.apply(&x).unwrap();
        assert!(y.proj_eq(&HomogeneousPoint::new(1.0, -0.4, 1.0), 1e-15));
        assert!(inv
            .other_fixed_point()
            .proj_eq(&HomogeneousPoint::new(0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn secant_pair_is_swapped() {
        let c = Conic::unit_circle();
        let l = HomogeneousLine::affine(0.0, 1.0, -0.5);
        let p = HomogeneousPoint::affine(0.3, 0.5);
        let inv = line_involution_fixing_point(&p, &l, &c).unwrap();
        let x = 0.75f64.sqrt();
        let a = HomogeneousPoint::affine(x, 0.5);
        let b = HomogeneousPoint::affine(-x, 0.5);
        assert!(inv.apply(&a).unwrap().proj_eq(&b, 1e-14));
        assert!(inv.apply(&p).unwrap().proj_eq(&p, 1e-14));
    }

    #[test]
    fn tangent_and_base_point_configurations() {
        let c = Conic::unit_circle();
        let tangent = HomogeneousLine::affine(0.0, 1.0, -1.0);
        let err = line_involution_fixing_point(&HomogeneousPoint::affine(0.5, 1.0), &tangent, &c).unwrap_err();
        assert_eq!(err, Error::TangentLine);
        let secant = HomogeneousLine::affine(0.0, 1.0, 0.0);
        let err = line_involution_fixing_point(&HomogeneousPoint::affine(1.0, 0.0), &secant, &c).unwrap_err();
        assert_eq!(err, Error::BasePoint);
    }
}
