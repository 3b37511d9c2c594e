use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{
    adjugate, argmax_modulus, binary_quadratic_roots, lex_order, pencil_basis, Conic, ConicClass, HomogeneousLine,
    HomogeneousPoint,
};
use crate::error::{Error, Result};
use crate::poly::roots;
use crate::scalar::Scalar;

/// The two (complex) intersection points of a line with a conic, ordered
/// lexicographically. A tangent line yields its contact point twice.
pub fn line_conic_intersection<S: Scalar>(
    l: &HomogeneousLine<S>,
    c: &Conic<S>,
) -> Result<[HomogeneousPoint<Complex64>; 2]> {
    let m = c.matrix().map(|x| x.to_complex());
    let lv = l.vector().map(|x| x.to_complex());
    let (p1, p2) = pencil_basis(&lv);
    let q11 = p1.dot(&(m * p1));
    let q12 = p1.dot(&(m * p2));
    let q22 = p2.dot(&(m * p2));
    let scale = m.norm() * p1.norm() * p2.norm();
    let roots = binary_quadratic_roots(q11, q12, q22, scale).ok_or(Error::LineInConic)?;
    let mut pts: Vec<Vector3<Complex64>> = roots.iter().map(|(mu, nu)| p1 * *mu + p2 * *nu).collect();
    pts.sort_by(lex_order);
    Ok([
        HomogeneousPoint::try_from_vector(pts[0])?.canonical(),
        HomogeneousPoint::try_from_vector(pts[1])?.canonical(),
    ])
}

/// Splits a rank-2 or rank-1 conic into its (complex) lines.
fn split_degenerate(d: &Matrix3<Complex64>) -> Vec<HomogeneousLine<Complex64>> {
    let b = adjugate(d);
    let diag = [b[(0, 0)], b[(1, 1)], b[(2, 2)]];
    let i = argmax_modulus(&diag);
    let a = if diag[i].norm() > 1e-10 * d.norm() * d.norm() {
        let p = b.column(i) / (-diag[i]).sqrt();
        // D + [p]x is rank one for either sign of the root
        let px = Matrix3::new(
            Complex64::new(0.0, 0.0),
            -p[2],
            p[1],
            p[2],
            Complex64::new(0.0, 0.0),
            -p[0],
            -p[1],
            p[0],
            Complex64::new(0.0, 0.0),
        );
        d + px
    } else {
        *d
    };
    let k = argmax_modulus(a.as_slice());
    let (r, c) = (k % 3, k / 3);
    let row: Vector3<Complex64> = a.row(r).transpose();
    let col: Vector3<Complex64> = a.column(c).into();
    let mut out = vec![HomogeneousLine::from_vector(row)];
    let col_line = HomogeneousLine::from_vector(col);
    if !col_line.proj_eq(&out[0], 1e-9) {
        out.push(col_line);
    }
    out
}

/// Common points of two conics (up to four, complex), sorted lexicographically.
///
/// Finds a degenerate member of the pencil spanned by the two, splits it
/// into lines and intersects those with one of the inputs.
pub fn conic_conic_intersection<S: Scalar>(c1: &Conic<S>, c2: &Conic<S>) -> Result<Vec<HomogeneousPoint<Complex64>>> {
    let a = c1.matrix().map(|x| x.to_complex());
    let b = c2.matrix().map(|x| x.to_complex());
    let (a, b) = (a.unscale(a.norm()), b.unscale(b.norm()));
    if super::minor_residual(a.as_slice(), b.as_slice()) < 1e-12 {
        return Err(Error::ProportionalConics);
    }
    let degenerate = if c2.class() != ConicClass::Regular {
        b
    } else if c1.class() != ConicClass::Regular {
        a
    } else {
        // det(a + x b) is a cubic in x: interpolate at four nodes
        let f = |x: f64| (a + b * Complex64::new(x, 0.0)).determinant();
        let (f0, f1, fm, f2) = (f(0.0), f(1.0), f(-1.0), f(2.0));
        let c0 = f0;
        let c2 = (f1 + fm) / 2.0 - f0;
        let odd = (f1 - fm) / 2.0; // c1 + c3
        let c3 = (f2 - c0 - c2 * 4.0 - odd * 2.0) / 6.0;
        let c1 = odd - c3;
        let xs = roots(&[c0, c1, c2, c3]);
        // prefer the member farthest from rank one
        xs.iter()
            .map(|x| a + b * *x)
            .max_by(|m, n| {
                let s = |m: &Matrix3<Complex64>| {
                    let sv = m.svd(false, false).singular_values;
                    sv[1] / sv[0]
                };
                s(m).partial_cmp(&s(n)).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(Error::DegenerateConic)?
    };
    let other = if (degenerate - a).norm() < 1e-12 { b } else { a };
    let other = Conic::from_matrix(other)?;
    let mut pts: Vec<Vector3<Complex64>> = Vec::new();
    for line in split_degenerate(&degenerate) {
        for p in line_conic_intersection(&line, &other)? {
            if !pts.iter().any(|q| HomogeneousPoint::from_vector(*q).proj_eq(&p, 1e-8)) {
                pts.push(p.vector());
            }
        }
    }
    pts.sort_by(lex_order);
    Ok(pts
        .into_iter()
        .map(|v| HomogeneousPoint::from_vector(v).canonical())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secant_meets_circle_in_two_real_points() {
        let l = HomogeneousLine::affine(0.0, 1.0, -0.5);
        let [p, q] = line_conic_intersection(&l, &Conic::unit_circle()).unwrap();
        let x = (0.75f64).sqrt();
        let a = p.to_real(1e-12).unwrap().to_affine().unwrap();
        let b = q.to_real(1e-12).unwrap().to_affine().unwrap();
        assert!((a[0] + x).abs() < 1e-14 && (b[0] - x).abs() < 1e-14);
        assert!((a[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn line_in_degenerate_conic_detected() {
        let pair = Conic::from_coefficients([0.0, 0.5, 0.0, 0.0, 0.0, 0.0]).unwrap(); // x y = 0
        let l = HomogeneousLine::affine(1.0, 0.0, 0.0);
        assert_eq!(line_conic_intersection(&l, &pair).unwrap_err(), Error::LineInConic);
    }

    #[test]
    fn circle_meets_ellipse_in_four_points() {
        let c = Conic::circle(0.0, 0.0, 1.5);
        let e = Conic::ellipse(2.0, 1.0);
        let pts = conic_conic_intersection(&c, &e).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(c.to_complex().point_residual(p) < 1e-12);
            assert!(e.to_complex().point_residual(p) < 1e-12);
            assert!(p.to_real(1e-9).is_some());
        }
    }

    #[test]
    fn concentric_circles_meet_at_circular_points() {
        let pts = conic_conic_intersection(&Conic::unit_circle(), &Conic::circle(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            let v = p.vector();
            assert!(v[2].norm() < 1e-12);
            assert!((v[0] * v[0] + v[1] * v[1]).norm() < 1e-12);
        }
    }
}
