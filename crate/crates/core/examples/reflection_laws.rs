//! The reflection involutions: Euclidean mirror, the projective law fixing a
//! tangent and a transversal line, the form-preserving reflection in space,
//! and the involution of a line swapping its points on a conic.

use caustica::projgeo::{Conic, HomogeneousLine, HomogeneousPoint};
use caustica::reflectors::{
    build_projective_involution, constant_curvature_reflection, line_involution_fixing_point, mirror_reflection,
    reflect_direction, reflect_line_pencil, PlaneInvolution, SpaceInvolution,
};
use nalgebra::{Matrix3, Vector3};

fn main() -> caustica::Result<()> {
    let v = [1.0, -1.0];
    println!("mirror in the x-axis: {:?}", mirror_reflection([1.0, 0.0], v)?);
    // A slanted transversal: the tangent is kept, the transversal reversed.
    println!(
        "tangent x, transversal (1, 2): {:?}",
        reflect_direction([1.0, 0.0], [1.0, 2.0], v)
    );

    let base = [0.0, 1.0];
    let inv = PlaneInvolution::from_directions(base, [1.0, 0.0], [0.3, 1.0])?;
    let m = inv.normalized_matrix();
    println!(
        "involution matrix rows: {:.4?}, {:.4?}",
        [m[(0, 0)], m[(0, 1)]],
        [m[(1, 0)], m[(1, 1)]]
    );
    let tangent = HomogeneousLine::through(base, [1.0, 0.0])?;
    let transversal = HomogeneousLine::through(base, [0.3, 1.0])?;
    let same = build_projective_involution(&tangent, &transversal, &HomogeneousPoint::affine(base[0], base[1]))?;
    println!(
        "built from lines agrees: {}",
        (same.normalized_matrix() - inv.normalized_matrix()).amax() < 1e-12
    );
    let chord = HomogeneousLine::through(base, [1.0, -2.0])?;
    println!(
        "chord slope -2 reflects to {:?}",
        reflect_line_pencil(&inv, &chord)?.coords()
    );

    let sphere = Matrix3::identity();
    let (h1, h2) = (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 1.0));
    let w = Vector3::new(0.2, 0.7, -0.4);
    let image = constant_curvature_reflection(&sphere, &h1, &h2, &w)?;
    println!(
        "spherical reflection: ({:.4}, {:.4}, {:.4}), |w| = {:.6}, |Jw| = {:.6}",
        image.x,
        image.y,
        image.z,
        w.norm(),
        image.norm()
    );
    let minkowski = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    let j = SpaceInvolution::fixing_plane(&minkowski, &h1, &Vector3::new(0.0, 0.5, 1.0))?;
    let other = SpaceInvolution::from_eigenbasis(&minkowski, &h1, &Vector3::new(0.0, 0.5, 1.0))?;
    println!(
        "Minkowski reflection: isometry residual {:.2e}, two constructions differ by {:.2e}",
        j.isometry_residual(),
        (j.matrix() - other.matrix()).amax()
    );

    let circle = Conic::unit_circle();
    let line = HomogeneousLine::affine(0.0, 1.0, -0.5);
    let fixed = HomogeneousPoint::affine(0.0, 0.5);
    let sigma = line_involution_fixing_point(&fixed, &line, &circle)?;
    // The second fixed point is the direction of the line, at infinity.
    println!(
        "line involution on y = 1/2: other fixed point {:?}",
        sigma.other_fixed_point().coords()
    );
    let moved = sigma.apply(&HomogeneousPoint::affine(3f64.sqrt() / 2.0, 0.5))?;
    println!(
        "it swaps the circle points: ({:.6}, 0.5) -> {:?}",
        3f64.sqrt() / 2.0,
        moved.to_affine()
    );
    Ok(())
}
