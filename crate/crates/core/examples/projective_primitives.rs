//! Cross-ratios, poles and polars, tangents and intersections on a few conics.

use caustica::projgeo::{
    apply_map, conic_conic_intersection, cross_ratio, dualize_conic, harmonic_conjugate, line_conic_intersection,
    orthogonal_polarity, polar_line, pole_of_line, tangent_lines_from_point, Conic, HomogeneousLine, HomogeneousPoint,
    ProjectiveMap,
};
use caustica::Complex64;
use nalgebra::Matrix3;

fn show(v: [Complex64; 3]) -> String {
    let part = |z: Complex64| {
        if z.im.abs() < 1e-12 {
            format!("{:.4}", z.re)
        } else {
            format!("{:.4}{:+.4}i", z.re, z.im)
        }
    };
    format!("[{}]", v.map(part).join(", "))
}

fn main() -> caustica::Result<()> {
    // Four lines through the origin with slopes 0, inf, 1, -1 form a harmonic quadruple.
    let through_origin = |dx: f64, dy: f64| HomogeneousLine::through([0.0, 0.0], [dx, dy]);
    let (a, b, c, d) = (
        through_origin(1.0, 0.0)?,
        through_origin(0.0, 1.0)?,
        through_origin(1.0, 1.0)?,
        through_origin(1.0, -1.0)?,
    );
    println!(
        "cross-ratio of slopes (0, inf; 1, -1) = {:?}",
        cross_ratio(&a, &b, &c, &d)?
    );
    let partner = harmonic_conjugate(&a, &b, &c)?;
    println!("harmonic partner of slope 1: {:?}", partner.coords());

    let ellipse = Conic::ellipse(2.0, 1.0);
    let outside = HomogeneousPoint::affine(3.0, 1.0);
    let polar = polar_line(&outside, &ellipse)?;
    println!("polar of (3, 1): {:?}", polar.coords());
    println!("pole of that polar: {:?}", pole_of_line(&polar, &ellipse)?.to_affine());
    for t in tangent_lines_from_point(&outside, &ellipse)? {
        println!("tangent from (3, 1): {}", show(t.coords()));
    }
    for p in line_conic_intersection(&polar, &ellipse)? {
        println!("  polar meets the ellipse at {}", show(p.coords()));
    }

    // Two circles meet in two real points and the two circular points at infinity.
    let shifted = Conic::circle(1.0, 0.0, 1.0);
    let unit = Conic::unit_circle();
    for p in conic_conic_intersection(&unit, &shifted)? {
        println!("circle meet: {}", show(p.coords()));
    }

    println!("dual of the ellipse: {:?}", dualize_conic(&ellipse)?.coefficients());
    println!(
        "orthogonal polarity of x + 2y - 1 = 0: {:?}",
        orthogonal_polarity(&HomogeneousLine::affine(1.0, 2.0, -1.0)).coords()
    );

    let stretch = ProjectiveMap::new(Matrix3::new(2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0))?;
    let image = apply_map(&stretch, &unit);
    println!("unit circle stretched by 2 in x: {:?}", image.coefficients());
    println!("matches ellipse(2, 1): {}", image.proj_eq(&ellipse, 1e-12));
    Ok(())
}
