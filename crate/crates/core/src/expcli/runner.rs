use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Matrix3;
use rand::Rng;

use super::report::Report;
use super::scenario::{CausticTarget, Experiment, FormSpec, IntegralSpec, InvariantTarget, Overrides, Scenario};
use super::svg::orbit_svg;
use super::ExpError;
use crate::billiard::{
    dualize_billiard, orbit, Boundary, ConicBoundary, DualBilliard, FieldKind, PhaseState, SurfaceBoundary,
    TransversalField,
};
use crate::caustics::{check_absolute_caustic, check_complex_caustic, check_invariant_curve, ConfocalPencil};
use crate::error::Error;
use crate::integrals::{
    canonical_integral, check_dual_invariance, check_reflection_invariance, invariant_curve_integral,
    pencil_ratio_integral, verdicts_agree, RationalIntegral, SamplingOptions,
};
use crate::pencil_equivalence::{
    a_orthogonal_direction, degenerate_pencil_limit, equivalence_check, normalize_form, FormSignature, LIMIT_STEPS,
};
use crate::poly::HomPoly;
use crate::projgeo::{
    adjugate, dualize_conic, orthogonal_polarity, pencil_basis, Conic, HomogeneousLine, HomogeneousPoint,
};
use crate::reflectors::{build_projective_involution, reflect_line_pencil};
use crate::sampling::{derive_seed, rng, GoldenSequence};

/// Tolerance of the 0/1 agreement row of a dualize run.
const AGREEMENT_TOLERANCE: f64 = 0.5;

/// A report together with the figure it produced, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub svg: Option<String>,
}

/// Files written by [`run_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub report: Report,
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Runs the scenario and writes its CSV (and SVG, if any) under `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunResult, ExpError> {
    let started = Instant::now();
    let Outcome { mut report, svg } = evaluate(scenario)?;
    report.runtime = started.elapsed();
    let write = |relative: &Path, bytes: &[u8]| -> Result<PathBuf, ExpError> {
        let path = out_dir.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|source| ExpError::Write {
                path: parent.to_owned(),
                source,
            })?;
        }
        std::fs::write(&path, bytes).map_err(|source| ExpError::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    };
    let csv = write(&scenario.output.csv, report.to_csv_string()?.as_bytes())?;
    let svg = match (svg, &scenario.output.svg) {
        (Some(text), Some(relative)) => Some(write(relative, text.as_bytes())?),
        _ => None,
    };
    Ok(RunResult { report, csv, svg })
}

/// Loads, overrides and runs one scenario file.
pub fn run_file(path: &Path, overrides: &Overrides, out_dir: &Path) -> Result<RunResult, ExpError> {
    let mut scenario = Scenario::load(path)?;
    scenario.apply(overrides)?;
    run_scenario(&scenario, out_dir)
}

/// Runs every file on its own thread; results come back in input order.
pub fn run_files(paths: &[PathBuf], overrides: &Overrides, out_dir: &Path) -> Vec<Result<RunResult, ExpError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| scope.spawn(move || run_file(p, overrides, out_dir)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    })
}

/// 2 if any scenario could not run, else 1 if any failed, else 0.
pub fn exit_code<'a>(results: impl IntoIterator<Item = &'a Result<RunResult, ExpError>>) -> i32 {
    let mut code = 0;
    for r in results {
        match r {
            Err(_) => return 2,
            Ok(run) if !run.report.passed() => code = 1,
            Ok(_) => {}
        }
    }
    code
}

/// Computes the report without touching the file system.
pub fn evaluate(scenario: &Scenario) -> Result<Outcome, ExpError> {
    let ctx = Context::new(scenario)?;
    let mut report = Report::new(&scenario.name);
    let mut svg = None;
    match &scenario.experiment {
        Experiment::Simulate {
            start,
            direction,
            bounces,
            caustic,
        } => svg = Some(ctx.simulate(&mut report, *start, *direction, *bounces, caustic.as_ref())?),
        Experiment::VerifyCaustic { target } => ctx.verify_caustic(&mut report, target)?,
        Experiment::VerifyIntegral { integral } => {
            let integral = ctx.integral(integral)?;
            let r = check_reflection_invariance(&integral, &ctx.boundary, &ctx.field, &ctx.options);
            report.extend("reflection-jump", r.jumps, ctx.options.tolerance);
            report.notes.push(format!("integral: {integral}"));
            note_skipped(&mut report, r.skipped);
        }
        Experiment::VerifyInvariantCurve { curve } => ctx.verify_invariant_curve(&mut report, curve)?,
        Experiment::ClassifyPencil { form } => ctx.classify_pencil(&mut report, form)?,
        Experiment::Dualize { integral } => ctx.dualize(&mut report, integral.as_ref())?,
        Experiment::Equivalence { form } => {
            let form = ctx.form(form)?;
            let r = equivalence_check(&ctx.boundary, &ctx.field, &form, &ctx.options)?;
            report.notes.push(format!("surface model: {:?}", r.model));
            report.extend("equivalence", r.discrepancies, ctx.options.tolerance);
            note_skipped(&mut report, r.skipped);
        }
    }
    Ok(Outcome { report, svg })
}

fn note_skipped(report: &mut Report, skipped: usize) {
    if skipped > 0 {
        report.notes.push(format!("{skipped} degenerate samples skipped"));
    }
}

struct Context<'a> {
    scenario: &'a Scenario,
    boundary: ConicBoundary,
    field: TransversalField,
    options: SamplingOptions,
}

impl<'a> Context<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self, ExpError> {
        let boundary = ConicBoundary::from_conic(scenario.table.conic.clone())?;
        let field = TransversalField::new(scenario.table.field.clone(), &boundary)?;
        Ok(Self {
            scenario,
            boundary,
            field,
            options: SamplingOptions {
                samples: scenario.samples,
                seed: scenario.seed,
                exclusion: scenario.exclusion,
                tolerance: scenario.tolerance,
            },
        })
    }

    fn table(&self) -> &Conic {
        &self.scenario.table.conic
    }

    fn companion(&self) -> Result<&Conic, ExpError> {
        match &self.scenario.table.field {
            FieldKind::DualPencil { companion } => Ok(companion),
            _ => Err(ExpError::InvalidValue {
                key: "table.field".into(),
                reason: "this experiment needs a dual-pencil field".into(),
            }),
        }
    }

    fn confocal(&self) -> Result<ConfocalPencil, ExpError> {
        Ok(ConfocalPencil::of_conic(self.table())?)
    }

    fn integral(&self, spec: &IntegralSpec) -> Result<RationalIntegral, ExpError> {
        Ok(match spec {
            IntegralSpec::Canonical => match &self.scenario.table.field {
                FieldKind::Exotic(case) => canonical_integral(*case)?,
                _ => unreachable!("validated at parse time"),
            },
            IntegralSpec::Confocal => {
                let pencil = self.confocal()?;
                pencil_ratio_integral(&Conic::from_matrix(*pencil.anchor())?, &Conic::isotropic())?
            }
            IntegralSpec::DualPencil => {
                pencil_ratio_integral(&dualize_conic(self.table())?, &dualize_conic(self.companion()?)?)?
            }
            IntegralSpec::Pencil { upper, lower } => pencil_ratio_integral(upper, lower)?,
            IntegralSpec::InvariantCurve { curve } => {
                invariant_curve_integral(&HomPoly::quadratic_form(curve.matrix()), 2)?
            }
        })
    }

    fn caustic_conic(&self, target: &CausticTarget) -> Result<Conic, ExpError> {
        match target {
            CausticTarget::Conic(c) => Ok(c.clone()),
            CausticTarget::Confocal(lambda) => Ok(self.confocal()?.member(*lambda)?),
            CausticTarget::Absolute => Err(ExpError::InvalidValue {
                key: "check.absolute".into(),
                reason: "the absolute is only checked by verify-caustic".into(),
            }),
        }
    }

    fn form(&self, spec: &FormSpec) -> Result<Matrix3<f64>, ExpError> {
        Ok(match spec {
            FormSpec::Explicit(m) => *m,
            FormSpec::Member(lambda) => adjugate(&(self.table().adjugate() - self.companion()?.adjugate() * *lambda)),
            FormSpec::Limit(lambda) => degenerate_pencil_limit(
                &self.table().adjugate(),
                &self.companion()?.adjugate(),
                *lambda,
                &LIMIT_STEPS,
            )?,
        })
    }

    /// Boundary parameters of the golden sequence, away from the excluded set.
    fn parameters(&self, stream: u64) -> impl Iterator<Item = f64> + '_ {
        let (lo, hi) = self.boundary.domain();
        GoldenSequence::new(derive_seed(self.scenario.seed, stream))
            .map(move |u| lo + (hi - lo) * u)
            .filter(|t| {
                self.field
                    .near_excluded(&self.boundary, *t, self.options.exclusion)
                    .is_none()
            })
            .take(self.options.samples)
    }

    fn simulate(
        &self,
        report: &mut Report,
        start: [f64; 2],
        direction: [f64; 2],
        bounces: usize,
        caustic: Option<&CausticTarget>,
    ) -> Result<String, ExpError> {
        let tol = self.options.tolerance;
        let o = orbit(&self.boundary, &self.field, PhaseState::new(start, direction)?, bounces)?;
        let hits = &o.states[1..];
        report.extend(
            "on-boundary",
            hits.iter().map(|s| self.boundary.boundary_residual(s.point())),
            tol,
        );
        if o.escaped {
            report.notes.push(format!("orbit escaped after {} bounces", hits.len()));
        }
        let alpha = caustic.map(|c| self.caustic_conic(c)).transpose()?;
        if let Some(alpha) = &alpha {
            report.extend(
                "caustic-tangency",
                o.states.iter().map(|s| alpha.tangency_residual(&s.line())),
                tol,
            );
        }
        let layer = alpha.and_then(|a| ConicBoundary::from_conic(a).ok());
        if caustic.is_some() && layer.is_none() {
            report
                .notes
                .push("caustic is not an ellipse or the parabola; plot omits it".into());
        }
        orbit_svg(&o.states, &self.boundary, layer.as_ref())
    }

    fn verify_caustic(&self, report: &mut Report, target: &CausticTarget) -> Result<(), ExpError> {
        let r = match target {
            CausticTarget::Absolute => {
                let model = self.scenario.table.model.expect("validated at parse time");
                check_absolute_caustic(&SurfaceBoundary::new(model, self.table().clone())?, &self.options)?
            }
            other => check_complex_caustic(&self.boundary, &self.field, &self.caustic_conic(other)?, &self.options),
        };
        report.extend("tangency", r.residuals, self.options.tolerance);
        report
            .notes
            .push(format!("tangent pairs permuted {}, fixed {}", r.permuted, r.fixed));
        note_skipped(report, r.skipped);
        Ok(())
    }

    fn verify_invariant_curve(&self, report: &mut Report, target: &InvariantTarget) -> Result<(), ExpError> {
        let dual = dualize_billiard(&self.boundary, &self.field)?;
        let curve = match target {
            InvariantTarget::Conic(c) => c.clone(),
            InvariantTarget::Confocal(lambda) => self.confocal()?.dual_member(*lambda)?,
        };
        let r = check_invariant_curve(&dual, &curve, &self.options);
        report.extend("invariant-points", r.residuals, self.options.tolerance);
        note_skipped(report, r.skipped);
        let integral = invariant_curve_integral(&HomPoly::quadratic_form(curve.matrix()), 2)?;
        let j = check_dual_invariance(&integral, &dual, &self.options);
        report.extend("curve-integral-jump", j.jumps, self.options.tolerance);
        Ok(())
    }

    fn classify_pencil(&self, report: &mut Report, spec: &FormSpec) -> Result<(), ExpError> {
        let form = self.form(spec)?;
        let sig = FormSignature::of(&form);
        let norm = normalize_form(&form)?;
        report.notes.push(format!(
            "signature ({}, {}, {}): {:?}",
            sig.positive, sig.negative, sig.zero, norm.model
        ));
        report.push("congruence", norm.congruence_residual(&form), self.options.tolerance);
        let mut skipped = 0;
        let sines: Vec<f64> = self
            .parameters(2)
            .filter_map(|t| {
                let pair = self.field.direction(&self.boundary, t).and_then(|a| {
                    let b = a_orthogonal_direction(&self.boundary, &form, t)?;
                    Ok((a, b))
                });
                match pair {
                    Ok((a, b)) => Some((a[0] * b[1] - a[1] * b[0]).abs() / (a[0].hypot(a[1]) * b[0].hypot(b[1]))),
                    Err(_) => {
                        skipped += 1;
                        None
                    }
                }
            })
            .collect();
        report.extend("field-agreement", sines, self.options.tolerance);
        note_skipped(report, skipped);
        Ok(())
    }

    fn dualize(&self, report: &mut Report, integral: Option<&IntegralSpec>) -> Result<(), ExpError> {
        let dual = dualize_billiard(&self.boundary, &self.field)?;
        let mut probe = rng(derive_seed(self.scenario.seed, 3));
        let mut skipped = 0;
        let residuals: Vec<f64> = self
            .parameters(3)
            .filter_map(|t| {
                let phi = probe.gen_range(0.0..std::f64::consts::PI);
                match conjugacy_residual(&dual, &self.field, t, phi) {
                    Ok(r) => Some(r),
                    Err(_) => {
                        skipped += 1;
                        None
                    }
                }
            })
            .collect();
        report.extend("conjugacy", residuals, self.options.tolerance);
        note_skipped(report, skipped);
        if let Some(spec) = integral {
            let integral = self.integral(spec)?;
            let primal = check_reflection_invariance(&integral, &self.boundary, &self.field, &self.options);
            let dual_report = check_dual_invariance(&integral, &dual, &self.options);
            let agree = verdicts_agree(&primal, &dual_report);
            report.notes.push(format!(
                "primal {}, dual {}",
                if primal.passed() { "conserved" } else { "not conserved" },
                if dual_report.passed() {
                    "conserved"
                } else {
                    "not conserved"
                },
            ));
            report.extend("primal-jump", primal.jumps, self.options.tolerance);
            report.extend("dual-jump", dual_report.jumps, self.options.tolerance);
            report.push("verdict-agreement", if agree { 0.0 } else { 1.0 }, AGREEMENT_TOLERANCE);
        }
        Ok(())
    }
}

/// Distance between `polar(reflect(ℓ))` and `σ_P(polar(ℓ))` for the line
/// `ℓ` through the boundary point at angle `phi` in the pencil basis.
fn conjugacy_residual(dual: &DualBilliard, field: &TransversalField, t: f64, phi: f64) -> Result<f64, Error> {
    let b = dual.boundary();
    let p = b.point(t);
    let q = HomogeneousPoint::affine(p[0], p[1]);
    let tangent = HomogeneousLine::through(p, b.tangent(t))?;
    let normal = HomogeneousLine::through(p, field.direction(b, t)?)?;
    let inv = build_projective_involution(&tangent, &normal, &q)?;
    let sigma = dual.sigma_at(t)?;
    let (e1, e2) = pencil_basis(&q.vector());
    let ell = HomogeneousLine::from_vector(e1 * phi.cos() + e2 * phi.sin());
    let lhs = orthogonal_polarity(&reflect_line_pencil(&inv, &ell)?);
    let rhs = sigma.apply(&orthogonal_polarity(&ell))?;
    Ok(lhs.distance(&rhs))
}
