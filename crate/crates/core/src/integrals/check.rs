use rand::Rng;

use super::rational::RationalIntegral;
use crate::billiard::{field_line_vector, Boundary, DualBilliard, FrameSource, TransversalField};
use crate::dd::DoubleDouble;
use crate::reflectors::reflect_direction;
use crate::sampling::rng;
use crate::scalar::{tol, Real};

/// Sampling controls shared by the invariance checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    pub samples: usize,
    pub seed: u64,
    /// Parameter radius kept away from the field's excluded set.
    pub exclusion: f64,
    /// Relative jump above which an event counts as a failure.
    pub tolerance: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 0,
            exclusion: 1e-3,
            tolerance: 1e-8,
        }
    }
}

/// Draw budget per requested event; integrals undefined almost everywhere
/// end with fewer than `samples` measured events.
const MAX_DRAWS_PER_SAMPLE: usize = 10;

/// Relative jumps `|R(before) - R(after)| / max(|R|, 1e-6)` and their aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    /// Per-event jumps in sampling order.
    pub jumps: Vec<f64>,
    pub samples: usize,
    pub max: f64,
    pub mean: f64,
    pub failures: usize,
    pub tolerance: f64,
    /// Boundary parameter of the largest jump.
    pub worst_parameter: f64,
    /// Events redrawn because the integral was undefined there (on its
    /// polar locus to working precision, or a degenerate frame).
    pub skipped: usize,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }

    fn collect(tolerance: f64) -> Accumulator {
        Accumulator {
            report: InvarianceReport {
                jumps: Vec::new(),
                samples: 0,
                max: 0.0,
                mean: 0.0,
                failures: 0,
                tolerance,
                worst_parameter: f64::NAN,
                skipped: 0,
            },
            sum: 0.0,
        }
    }
}

struct Accumulator {
    report: InvarianceReport,
    sum: f64,
}

impl Accumulator {
    fn push(&mut self, t: f64, before: Option<DoubleDouble>, after: Option<DoubleDouble>) {
        let (Some(a), Some(b)) = (before, after) else {
            self.report.skipped += 1;
            return;
        };
        let floor = a.abs().to_f64().max(tol::RELATIVE_FLOOR);
        let jump = (a - b).abs().to_f64() / floor;
        let r = &mut self.report;
        r.samples += 1;
        r.jumps.push(jump);
        self.sum += jump;
        if jump > r.tolerance {
            r.failures += 1;
        }
        if jump.is_nan() || jump > r.max {
            r.max = jump;
            r.worst_parameter = t;
        }
    }

    fn finish(mut self) -> InvarianceReport {
        if self.report.samples > 0 {
            self.report.mean = self.sum / self.report.samples as f64;
        }
        self.report
    }
}

fn sample_parameter<B: Boundary + ?Sized>(
    boundary: &B,
    field: &TransversalField,
    rng: &mut impl Rng,
    exclusion: f64,
) -> f64 {
    let (lo, hi) = boundary.domain();
    loop {
        let t = rng.gen_range(lo..hi);
        if field.near_excluded(boundary, t, exclusion).is_none() {
            return t;
        }
    }
}

/// Samples reflection events (boundary point away from the excluded set,
/// uniformly random incoming direction) and measures how much `integral`
/// changes. Evaluation runs in double-double so the measured jump reflects
/// the integral, not cancellation near its indeterminacy points. Events where
/// the integral is undefined are redrawn, so `samples` events are measured.
pub fn check_reflection_invariance<B: Boundary + ?Sized>(
    integral: &RationalIntegral,
    boundary: &B,
    field: &TransversalField,
    options: &SamplingOptions,
) -> InvarianceReport {
    let mut rng = rng(options.seed);
    let mut acc = InvarianceReport::collect(options.tolerance);
    for _ in 0..MAX_DRAWS_PER_SAMPLE * options.samples {
        if acc.report.samples == options.samples {
            break;
        }
        let t = sample_parameter(boundary, field, &mut rng, options.exclusion);
        let angle = rng.gen_range(0.0..std::f64::consts::PI);
        let x = boundary.point_exact(t);
        let tangent = boundary.tangent_exact(t);
        let normal = field.direction_exact(boundary, t);
        let v: [DoubleDouble; 2] = [angle.cos().into(), angle.sin().into()];
        let w = reflect_direction(tangent, normal, v);
        let before = integral.eval_coords(field_line_vector(x, v)).ok();
        let after = integral.eval_coords(field_line_vector(x, w)).ok();
        acc.push(t, before, after);
    }
    acc.finish()
}

/// Samples points `a` on tangent lines `L_P` of the dual curve and compares
/// `R(a)` with `R(σ_P(a))`. With fixed points `P` and `N`, the involution
/// maps `cos φ P + sin φ N` to `cos φ P - sin φ N`.
pub fn check_dual_invariance(
    integral: &RationalIntegral,
    dual: &DualBilliard,
    options: &SamplingOptions,
) -> InvarianceReport {
    let mut rng = rng(options.seed);
    let mut acc = InvarianceReport::collect(options.tolerance);
    for _ in 0..MAX_DRAWS_PER_SAMPLE * options.samples {
        if acc.report.samples == options.samples {
            break;
        }
        let t = sample_parameter(dual.boundary(), dual.field(), &mut rng, options.exclusion);
        let phi = rng.gen_range(0.0..std::f64::consts::PI);
        let Ok(frame) = <DualBilliard as FrameSource<DoubleDouble>>::frame_in(dual, t) else {
            acc.push(t, None, None);
            continue;
        };
        let size = |v: &[DoubleDouble; 3]| v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
        let c = DoubleDouble::from(phi.cos() / size(&frame.point));
        let s = DoubleDouble::from(phi.sin() / size(&frame.partner));
        let a: [DoubleDouble; 3] = std::array::from_fn(|k| c * frame.point[k] + s * frame.partner[k]);
        let b: [DoubleDouble; 3] = std::array::from_fn(|k| c * frame.point[k] - s * frame.partner[k]);
        acc.push(t, integral.eval_coords(a).ok(), integral.eval_coords(b).ok());
    }
    acc.finish()
}

/// Whether two checks reach the same verdict at their tolerances.
pub fn verdicts_agree(primal: &InvarianceReport, dual: &InvarianceReport) -> bool {
    primal.passed() == dual.passed()
}
