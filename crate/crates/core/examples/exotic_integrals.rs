//! The exotic line fields on the parabola y = x²: each case's rational first
//! integral, its conservation under reflection, and its tangency locus.

use caustica::billiard::{exotic_tangency_locus, ConicBoundary, ExoticCase, FieldKind, TransversalField};
use caustica::integrals::{canonical_integral, check_reflection_invariance, SamplingOptions};

fn main() -> caustica::Result<()> {
    let parabola = ConicBoundary::parabola();
    for tag in ExoticCase::TAGS {
        let n = tag.starts_with("2a").then_some(2);
        let case = ExoticCase::parse(tag, n)?;
        let integral = canonical_integral(case)?;
        let field = TransversalField::new(FieldKind::Exotic(case), &parabola)?;
        let options = SamplingOptions {
            samples: 200,
            seed: 11,
            exclusion: 1e-3,
            tolerance: 1e-8,
        };
        let r = check_reflection_invariance(&integral, &parabola, &field, &options);
        println!(
            "{case}: degree {}, {} tangency points",
            integral.degree(),
            exotic_tangency_locus(case).len()
        );
        println!("    {integral}");
        println!("    max relative jump over {} reflections: {:.2e}", r.samples, r.max);
    }

    // A field with the wrong integral: the jumps are of order one.
    let field = TransversalField::new(FieldKind::Exotic(ExoticCase::B2), &parabola)?;
    let wrong = canonical_integral(ExoticCase::C1)?;
    let r = check_reflection_invariance(&wrong, &parabola, &field, &SamplingOptions::default());
    println!(
        "2b2 field with the 2c1 integral: max jump {:.2e}, conserved {}",
        r.max,
        r.passed()
    );
    Ok(())
}
