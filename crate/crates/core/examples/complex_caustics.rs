//! Complex caustics: confocal conics that have no real tangent chords still
//! pass the complexified test, non-confocal conics and a quartic oval fail it,
//! and the dual-pencil field has every member of its pencil as a caustic.

use caustica::billiard::{ConicBoundary, FieldKind, QuarticOval, TransversalField};
use caustica::caustics::{check_complex_caustic, ConfocalPencil, DualPencilFamily};
use caustica::integrals::SamplingOptions;
use caustica::projgeo::Conic;

fn main() -> caustica::Result<()> {
    let options = SamplingOptions {
        samples: 300,
        seed: 5,
        exclusion: 1e-3,
        tolerance: 1e-9,
    };
    let table = ConicBoundary::ellipse(2.0, 1.0);
    let field = TransversalField::normal(&table);
    let pencil = ConfocalPencil::euclidean(2.0, 1.0);

    // λ > 4 gives an imaginary conic: no real tangents, yet still a caustic.
    for lambda in [0.5, 2.5, 6.0] {
        let r = check_complex_caustic(&table, &field, &pencil.member(lambda)?, &options);
        println!(
            "confocal λ = {lambda}: max {:.2e}, swapped tangent pairs {}",
            r.max_residual(),
            r.permuted
        );
    }
    let stranger = Conic::ellipse(1.5, 0.5);
    let r = check_complex_caustic(&table, &field, &stranger, &options);
    println!(
        "non-confocal ellipse(1.5, 0.5): max {:.2e}, passed {}",
        r.max_residual(),
        r.passed()
    );

    let oval = QuarticOval::new(2.0, 1.0);
    let oval_field = TransversalField::normal(&oval);
    let best = [0.5, 1.0, 2.0]
        .iter()
        .flat_map(|a| [0.3, 0.8].map(|b| (*a, b)))
        .map(|(a, b)| check_complex_caustic(&oval, &oval_field, &Conic::ellipse(a, b), &options).max_residual())
        .fold(f64::INFINITY, f64::min);
    println!("quartic oval, best of six candidate ellipses: {best:.2e}");

    let companion = Conic::ellipse(1.25, 0.5);
    let family = DualPencilFamily::from_table(table.conic(), &companion)?;
    let dp_field = TransversalField::new(FieldKind::DualPencil { companion }, &table)?;
    for lambda in [0.3, 0.6] {
        let r = check_complex_caustic(&table, &dp_field, &family.member(lambda)?, &options);
        println!("dual-pencil member {lambda}: max {:.2e}", r.max_residual());
    }
    Ok(())
}
