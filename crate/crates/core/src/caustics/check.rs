use num_complex::Complex64;

use crate::billiard::{Boundary, DualBilliard, SurfaceBoundary, TransversalField};
use crate::error::Result;
use crate::integrals::SamplingOptions;
use crate::projgeo::{line_conic_intersection, tangent_lines_from_point, Conic, HomogeneousLine, HomogeneousPoint};
use crate::reflectors::{reflect_line_pencil, PlaneInvolution};
use crate::sampling::GoldenSequence;
use crate::scalar::Scalar;

/// Per-sample residuals of a caustic or invariant-curve check.
#[derive(Debug, Clone, PartialEq)]
pub struct CausticReport {
    pub residuals: Vec<f64>,
    /// Samples where the two tangent lines (or points) were swapped.
    pub permuted: usize,
    /// Samples where each was mapped to itself.
    pub fixed: usize,
    /// Samples skipped because the construction degenerated there.
    pub skipped: usize,
    pub tolerance: f64,
}

impl CausticReport {
    fn new(tolerance: f64) -> Self {
        Self {
            residuals: Vec::new(),
            permuted: 0,
            fixed: 0,
            skipped: 0,
            tolerance,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        !self.residuals.is_empty() && self.max_residual() < self.tolerance
    }

    fn record(&mut self, sample: Result<Sample>) {
        match sample {
            Ok(s) => {
                if s.permuted {
                    self.permuted += 1;
                } else {
                    self.fixed += 1;
                }
                self.residuals.push(s.residual);
            }
            Err(_) => self.skipped += 1,
        }
    }
}

struct Sample {
    residual: f64,
    permuted: bool,
}

impl Sample {
    /// Images matched to the originals either straight or crossed; the
    /// better matching decides the classification.
    fn matching<T>(images: &[T; 2], originals: &[T; 2], distance: impl Fn(&T, &T) -> f64) -> Self {
        let straight = distance(&images[0], &originals[0]).max(distance(&images[1], &originals[1]));
        let crossed = distance(&images[0], &originals[1]).max(distance(&images[1], &originals[0]));
        Self {
            residual: straight.min(crossed),
            permuted: crossed < straight,
        }
    }
}

/// Parameters from the seeded golden sequence, avoiding the field's excluded set.
fn parameters<'a, B: Boundary + ?Sized>(
    boundary: &'a B,
    field: &'a TransversalField,
    options: &SamplingOptions,
) -> impl Iterator<Item = f64> + 'a {
    let (lo, hi) = boundary.domain();
    let exclusion = options.exclusion;
    GoldenSequence::new(options.seed)
        .map(move |u| lo + u * (hi - lo))
        .filter(move |t| field.near_excluded(boundary, *t, exclusion).is_none())
        .take(options.samples)
}

/// Checks that the complexified reflection sends the two tangent lines from
/// each sampled boundary point to `alpha` into tangent lines of `alpha`.
/// The residual is the larger of the two relative tangency residuals.
pub fn check_complex_caustic<B: Boundary + ?Sized, S: Scalar>(
    boundary: &B,
    field: &TransversalField,
    alpha: &Conic<S>,
    options: &SamplingOptions,
) -> CausticReport {
    let alpha = alpha.to_complex();
    let mut report = CausticReport::new(options.tolerance);
    for t in parameters(boundary, field, options) {
        let sample = (|| -> Result<Sample> {
            let q = boundary.point(t);
            let inv = PlaneInvolution::from_directions(q, boundary.tangent(t), field.direction(boundary, t)?)?;
            let lines = tangent_lines_from_point(&HomogeneousPoint::affine(q[0], q[1]).to_complex(), &alpha)?;
            let images = [
                reflect_line_pencil(&inv, &lines[0])?,
                reflect_line_pencil(&inv, &lines[1])?,
            ];
            let tangency = alpha
                .tangency_residual(&images[0])
                .max(alpha.tangency_residual(&images[1]));
            let permuted = Sample::matching(&images, &lines, |a, b| a.distance(b)).permuted;
            Ok(Sample {
                residual: tangency,
                permuted,
            })
        })();
        report.record(sample);
    }
    report
}

/// Checks that `σ_P` permutes `L_P ∩ S*` setwise at sampled points of the dual curve.
pub fn check_invariant_curve<S: Scalar>(
    dual: &DualBilliard,
    invariant: &Conic<S>,
    options: &SamplingOptions,
) -> CausticReport {
    let invariant = invariant.to_complex();
    let mut report = CausticReport::new(options.tolerance);
    for t in parameters(dual.boundary(), dual.field(), options) {
        let sample = (|| -> Result<Sample> {
            let sigma = dual.sigma_at(t)?;
            let line = dual.tangent_line_at(t).to_complex();
            let points = line_conic_intersection(&line, &invariant)?;
            let images = [sigma.apply(&points[0])?, sigma.apply(&points[1])?];
            Ok(Sample::matching(&images, &points, |a, b| a.distance(b)))
        })();
        report.record(sample);
    }
    report
}

/// On a constant-curvature model, checks that the reflection `J` at each
/// sampled boundary point permutes the two isotropic lines through it:
/// the lines tangent to the absolute `<A x, x> = 0`.
pub fn check_absolute_caustic(boundary: &SurfaceBoundary, options: &SamplingOptions) -> Result<CausticReport> {
    let absolute = Conic::from_matrix(boundary.model().form())?.to_complex();
    let table = crate::billiard::ConicBoundary::from_conic(boundary.cone().clone())?;
    let field = TransversalField::normal(&table);
    let mut report = CausticReport::new(options.tolerance);
    for t in parameters(&table, &field, options) {
        let sample = (|| -> Result<Sample> {
            let p = table.point(t);
            let y = crate::billiard::lift_to_surface(boundary.model(), &HomogeneousPoint::affine(p[0], p[1]))?;
            let j = boundary.involution_at(&y)?;
            let lines = tangent_lines_from_point(&HomogeneousPoint::from_vector(y.map(Complex64::from)), &absolute)?;
            // lines are covectors: J acts on them by its transpose (J is an involution)
            let jt = j.matrix().transpose().map(Complex64::from);
            let images: [HomogeneousLine<Complex64>; 2] = [
                HomogeneousLine::try_from_vector(jt * lines[0].vector())?,
                HomogeneousLine::try_from_vector(jt * lines[1].vector())?,
            ];
            let tangency = absolute
                .tangency_residual(&images[0])
                .max(absolute.tangency_residual(&images[1]));
            let swap = Sample::matching(&images, &lines, |a, b| a.distance(b));
            Ok(Sample {
                residual: swap.residual.max(tangency),
                ..swap
            })
        })();
        report.record(sample);
    }
    Ok(report)
}
