//! An orbit in the ellipse x²/4 + y² = 1 whose chords all touch one confocal
//! ellipse, plus an SVG of the orbit with its caustic.

use caustica::billiard::{orbit, ConicBoundary, PhaseState, TransversalField};
use caustica::caustics::{check_complex_caustic, ConfocalPencil};
use caustica::expcli::render_orbit_svg;
use caustica::integrals::SamplingOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ConicBoundary::ellipse(2.0, 1.0);
    let field = TransversalField::normal(&table);
    let lambda = 0.5;
    let (a, b) = ((4.0f64 - lambda).sqrt(), (1.0f64 - lambda).sqrt());
    let caustic = ConfocalPencil::euclidean(2.0, 1.0).member(lambda)?;

    // Start on the caustic's top vertex, moving along its tangent.
    let start = PhaseState::new([0.0, b], [1.0, 0.0])?;
    let run = orbit(&table, &field, start, 40)?;
    let worst = run
        .states
        .iter()
        .map(|s| caustic.tangency_residual(&s.line()))
        .fold(0.0, f64::max);
    println!(
        "{} bounces, worst chord tangency to the caustic {worst:.2e}",
        run.states.len() - 1
    );

    let options = SamplingOptions {
        samples: 200,
        seed: 1,
        exclusion: 1e-3,
        tolerance: 1e-9,
    };
    for lambda in [-1.0, 0.5, 2.5] {
        let member = ConfocalPencil::euclidean(2.0, 1.0).member(lambda)?;
        let r = check_complex_caustic(&table, &field, &member, &options);
        println!(
            "confocal member {lambda:>4}: max residual {:.2e}, passed {}",
            r.max_residual(),
            r.passed()
        );
    }

    let path = std::env::temp_dir().join("elliptic-orbit.svg");
    render_orbit_svg(&run.states, &table, Some(&ConicBoundary::ellipse(a, b)), &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
