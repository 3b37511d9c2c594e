//! The dual billiard of an ellipse: integrals carry over through the
//! orthogonal polarity, and dual confocal conics are invariant curves.

use caustica::billiard::{dualize_billiard, ConicBoundary, TransversalField};
use caustica::caustics::{check_invariant_curve, ConfocalPencil};
use caustica::integrals::{
    check_dual_invariance, check_reflection_invariance, invariant_curve_integral, pencil_ratio_integral,
    verdicts_agree, SamplingOptions,
};
use caustica::poly::HomPoly;
use caustica::projgeo::Conic;

fn main() -> caustica::Result<()> {
    let table = ConicBoundary::ellipse(2.0, 1.0);
    let field = TransversalField::normal(&table);
    let dual = dualize_billiard(&table, &field)?;
    println!("dual curve: {:?}", dual.curve().coefficients());

    let options = SamplingOptions {
        samples: 200,
        seed: 3,
        exclusion: 1e-3,
        tolerance: 1e-8,
    };
    let pencil = ConfocalPencil::of_conic(table.conic())?;
    let confocal = pencil_ratio_integral(&Conic::from_matrix(*pencil.anchor())?, &Conic::isotropic())?;
    let primal = check_reflection_invariance(&confocal, &table, &field, &options);
    let image = check_dual_invariance(&confocal, &dual, &options);
    println!(
        "confocal integral: primal jump {:.2e}, dual jump {:.2e}, verdicts agree {}",
        primal.max,
        image.max,
        verdicts_agree(&primal, &image)
    );

    for lambda in [0.5, 2.0] {
        let member = pencil.dual_member(lambda)?;
        let integral = invariant_curve_integral(&HomPoly::quadratic_form(member.matrix()), 2)?;
        let jumps = check_dual_invariance(&integral, &dual, &options);
        let setwise = check_invariant_curve(&dual, &member, &options);
        println!(
            "dual member {lambda}: integral jump {:.2e}, setwise residual {:.2e}",
            jumps.max,
            setwise.max_residual()
        );
    }
    let generic = Conic::from_coefficients([1.3, 0.4, -0.2, 0.7, 0.1, -1.0])?;
    let r = check_invariant_curve(&dual, &generic, &options);
    println!(
        "generic conic: setwise residual {:.2e}, invariant {}",
        r.max_residual(),
        r.passed()
    );
    Ok(())
}
