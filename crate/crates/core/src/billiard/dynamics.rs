use super::boundary::{Boundary, ConicBoundary};
use super::field::TransversalField;
use crate::error::{Error, Result};
use crate::projgeo::HomogeneousLine;
use crate::reflectors::reflect_direction;
use crate::scalar::tol;

/// An oriented line through a base point: the last reflection point, or the
/// initial point of an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    point: [f64; 2],
    direction: [f64; 2],
}

impl PhaseState {
    pub fn new(point: [f64; 2], direction: [f64; 2]) -> Result<Self> {
        if direction[0] == 0.0 && direction[1] == 0.0 {
            return Err(Error::ZeroVelocity);
        }
        Ok(Self { point, direction })
    }

    pub fn point(&self) -> [f64; 2] {
        self.point
    }

    pub fn direction(&self) -> [f64; 2] {
        self.direction
    }

    pub fn line(&self) -> HomogeneousLine<f64> {
        HomogeneousLine::through(self.point, self.direction).expect("direction is nonzero")
    }
}

/// Result of one step: either a reflection or a ray that leaves an open table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Bounce(PhaseState),
    Escaped,
}

/// The projective reflection of `incoming` at boundary parameter `t`.
pub fn reflect_at<B: Boundary + ?Sized>(
    boundary: &B,
    field: &TransversalField,
    t: f64,
    incoming: [f64; 2],
) -> Result<[f64; 2]> {
    if let Some(parameter) = field.near_excluded(boundary, t, tol::EXCLUSION) {
        return Err(Error::SingularReflection { parameter });
    }
    let n = field
        .direction(boundary, t)
        .map_err(|_| Error::SingularReflection { parameter: t })?;
    Ok(reflect_direction(boundary.tangent(t), n, incoming))
}

/// Moves to the last forward intersection with the boundary and reflects.
///
/// The new direction is oriented towards the table side (the interior for
/// ellipses, the epigraph for the parabola).
pub fn billiard_step(boundary: &ConicBoundary, field: &TransversalField, state: &PhaseState) -> Result<StepOutcome> {
    let p = state.point;
    let d = state.direction;
    let dnorm = d[0].hypot(d[1]);
    let eps = 1e-9 * (1.0 + p[0].hypot(p[1])) / dnorm;
    let Some(s) = boundary
        .line_hits(p, d)
        .into_iter()
        .filter(|s| *s > eps)
        .reduce(f64::max)
    else {
        return Ok(StepOutcome::Escaped);
    };
    let hit = [p[0] + s * d[0], p[1] + s * d[1]];
    let t = boundary.param_of(hit);
    let hit = boundary.point(t);
    let mut w = reflect_at(boundary, field, t, d)?;
    let g = implicit_gradient(boundary, hit);
    if w[0] * g[0] + w[1] * g[1] > 0.0 {
        w = [-w[0], -w[1]];
    }
    Ok(StepOutcome::Bounce(PhaseState::new(hit, w)?))
}

fn implicit_gradient<B: Boundary + ?Sized>(boundary: &B, p: [f64; 2]) -> [f64; 2] {
    let h = 1e-6 * (1.0 + p[0].abs().max(p[1].abs()));
    [
        (boundary.implicit([p[0] + h, p[1]]) - boundary.implicit([p[0] - h, p[1]])) / (2.0 * h),
        (boundary.implicit([p[0], p[1] + h]) - boundary.implicit([p[0], p[1] - h])) / (2.0 * h),
    ]
}

/// A finite orbit: the visited states, and whether the last ray escaped.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub states: Vec<PhaseState>,
    pub escaped: bool,
}

/// Iterates [`billiard_step`] up to `max_bounces` times.
pub fn orbit(
    boundary: &ConicBoundary,
    field: &TransversalField,
    initial: PhaseState,
    max_bounces: usize,
) -> Result<Orbit> {
    let mut states = vec![initial];
    let mut state = initial;
    for _ in 0..max_bounces {
        match billiard_step(boundary, field, &state)? {
            StepOutcome::Bounce(next) => {
                states.push(next);
                state = next;
            }
            StepOutcome::Escaped => return Ok(Orbit { states, escaped: true }),
        }
    }
    Ok(Orbit { states, escaped: false })
}
