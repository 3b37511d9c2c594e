use nalgebra::Vector3;
use num_complex::Complex64;

use super::{binary_quadratic_roots, lex_order, pencil_basis, Conic, HomogeneousLine, HomogeneousPoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn require_regular<S: Scalar>(c: &Conic<S>) -> Result<()> {
    if c.is_regular() {
        Ok(())
    } else {
        Err(Error::DegenerateConic)
    }
}

/// Polar line `C p` of a point.
pub fn polar_line<S: Scalar>(p: &HomogeneousPoint<S>, c: &Conic<S>) -> Result<HomogeneousLine<S>> {
    require_regular(c)?;
    HomogeneousLine::try_from_vector(c.matrix() * p.vector())
}

/// Pole `adj(C) l` of a line; inverse of [`polar_line`].
pub fn pole_of_line<S: Scalar>(l: &HomogeneousLine<S>, c: &Conic<S>) -> Result<HomogeneousPoint<S>> {
    require_regular(c)?;
    HomogeneousPoint::try_from_vector(c.adjugate() * l.vector())
}

/// The two (complex) tangent lines from `p` to a regular conic, ordered
/// lexicographically by canonical coefficients. A point on the conic yields
/// its tangent twice.
pub fn tangent_lines_from_point<S: Scalar>(
    p: &HomogeneousPoint<S>,
    c: &Conic<S>,
) -> Result<[HomogeneousLine<Complex64>; 2]> {
    require_regular(c)?;
    let b = c.adjugate().map(|x| x.to_complex());
    let pv = p.vector().map(|x| x.to_complex());
    let (l1, l2) = pencil_basis(&pv);
    let q11 = l1.dot(&(b * l1));
    let q12 = l1.dot(&(b * l2));
    let q22 = l2.dot(&(b * l2));
    let scale = b.norm() * l1.norm() * l2.norm();
    // adj(C) regular means no line pencil lies entirely in the dual conic
    let roots = binary_quadratic_roots(q11, q12, q22, scale).ok_or(Error::DegenerateConic)?;
    let mut lines: Vec<Vector3<Complex64>> = roots.iter().map(|(mu, nu)| l1 * *mu + l2 * *nu).collect();
    lines.sort_by(lex_order);
    Ok([
        HomogeneousLine::try_from_vector(lines[0])?.canonical(),
        HomogeneousLine::try_from_vector(lines[1])?.canonical(),
    ])
}

/// The point whose coordinates are the line's coefficients: the Euclidean
/// normal of the 2-plane through the origin that projects to the line.
pub fn orthogonal_polarity<S: Scalar>(l: &HomogeneousLine<S>) -> HomogeneousPoint<S> {
    HomogeneousPoint::from_vector(l.vector())
}

/// Inverse of [`orthogonal_polarity`].
pub fn orthogonal_polarity_inverse<S: Scalar>(p: &HomogeneousPoint<S>) -> HomogeneousLine<S> {
    HomogeneousLine::from_vector(p.vector())
}

/// The dual conic `adj(C)`; its points are the tangent lines of `C` under
/// orthogonal polarity.
pub fn dualize_conic<S: Scalar>(c: &Conic<S>) -> Result<Conic<S>> {
    require_regular(c)?;
    Conic::from_matrix(c.adjugate())
}
