//! A dual-pencil field is the billiard of a constant-curvature surface: each
//! nondegenerate pencil member is a quadratic form whose signature picks the
//! sphere or the hyperboloid, and a rank-one member gives the plane in the limit.

use caustica::billiard::{Boundary, ConicBoundary, FieldKind, TransversalField};
use caustica::integrals::SamplingOptions;
use caustica::pencil_equivalence::{
    a_orthogonal_direction, degenerate_pencil_limit, equivalence_check, normalize_form, FormSignature, LIMIT_STEPS,
};
use caustica::projgeo::{adjugate, Conic};
use nalgebra::Matrix3;

fn member(table: &Conic, companion: &Conic, lambda: f64) -> Matrix3<f64> {
    adjugate(&(table.adjugate() - companion.adjugate() * lambda))
}

fn main() -> caustica::Result<()> {
    let options = SamplingOptions {
        samples: 100,
        seed: 21,
        exclusion: 1e-3,
        tolerance: 1e-9,
    };
    let ellipse = Conic::ellipse(2.0, 1.0);
    let table = ConicBoundary::ellipse(2.0, 1.0);
    for (companion, lambda) in [(Conic::circle(0.0, 0.0, 0.5), 0.5), (Conic::ellipse(0.5, 0.8), 0.3)] {
        let form = member(&ellipse, &companion, lambda);
        let norm = normalize_form(&form)?;
        let field = TransversalField::new(FieldKind::DualPencil { companion }, &table)?;
        let report = equivalence_check(&table, &field, &form, &options)?;
        println!(
            "signature {:?} -> {:?}: congruence residual {:.2e}, max discrepancy {:.2e} over {} samples",
            FormSignature::of(&form),
            norm.model,
            norm.congruence_residual(&form),
            report.max_discrepancy,
            report.samples
        );
    }

    // The circle/small-circle pencil has a rank-one member at λ = 4.
    let unit = Conic::unit_circle();
    let small = Conic::circle(0.0, 0.0, 0.5);
    let limit = degenerate_pencil_limit(&unit.adjugate(), &small.adjugate(), 4.0, &LIMIT_STEPS)?;
    println!("degenerate limit (normalized):\n{limit:.6}");

    // The form-orthogonal direction at the top of the circle is the radius for
    // both the limit form and a regular member.
    let circle = ConicBoundary::circle(0.0, 0.0, 1.0);
    let (lo, hi) = circle.domain();
    let t = lo + 0.25 * (hi - lo);
    for form in [limit, member(&unit, &small, 2.0)] {
        let d = a_orthogonal_direction(&circle, &form, t)?;
        println!("direction at t = {t:.4}: ({:.6}, {:.6})", d[0], d[1]);
    }
    Ok(())
}
