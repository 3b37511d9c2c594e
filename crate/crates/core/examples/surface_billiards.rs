//! Billiards on the sphere and the hyperboloid model, bounded by the cone
//! over an ellipse. Speed is conserved, the point stays on the surface, and
//! each reflection swaps the two isotropic tangent lines.

use caustica::billiard::{
    form_value, lift_to_surface, project_pi, surface_billiard_step, SurfaceBoundary, SurfaceModel, SurfaceState,
};
use caustica::caustics::check_absolute_caustic;
use caustica::integrals::SamplingOptions;
use caustica::projgeo::{Conic, HomogeneousPoint};
use nalgebra::Vector3;

fn main() -> caustica::Result<()> {
    for model in [SurfaceModel::Sphere, SurfaceModel::Hyperbolic] {
        let boundary = SurfaceBoundary::new(model, Conic::ellipse(0.7, 0.4))?;
        let point = lift_to_surface(model, &HomogeneousPoint::affine(0.1, 0.05))?;
        // Project (1, 0.3, 0) onto the tangent plane <A x, v> = 0.
        let raw = Vector3::new(1.0, 0.3, 0.0);
        let form = model.form();
        let velocity = raw - point * (point.dot(&(form * raw)) / point.dot(&(form * point)));
        let mut state = SurfaceState { point, velocity };
        let speed = form_value(model, &state.velocity);
        let (mut drift, mut off_surface): (f64, f64) = (0.0, 0.0);
        for _ in 0..30 {
            state = surface_billiard_step(&boundary, &state)?;
            drift = drift.max((form_value(model, &state.velocity) - speed).abs() / speed);
            off_surface = off_surface.max(model.surface_residual(&state.point));
        }
        let last = project_pi(&state.point)?.to_affine().unwrap_or([f64::NAN; 2]);
        println!("{model:?}: 30 bounces, speed drift {drift:.2e}, surface residual {off_surface:.2e}");
        println!("    last hit projects to ({:.4}, {:.4})", last[0], last[1]);

        let options = SamplingOptions {
            samples: 100,
            seed: 9,
            exclusion: 1e-3,
            tolerance: 1e-9,
        };
        let r = check_absolute_caustic(&boundary, &options)?;
        println!(
            "    absolute as caustic: max {:.2e}, swapped {}/{}",
            r.max_residual(),
            r.permuted,
            r.residuals.len()
        );
    }
    Ok(())
}
