use nalgebra::Vector3;

use super::boundary::{Boundary, ConicBoundary};
use super::field::{field_line_vector, TransversalField};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::projgeo::{dualize_conic, Conic, HomogeneousLine, HomogeneousPoint};
use crate::reflectors::LineInvolution;
use crate::scalar::{tol, Real};

/// The dual billiard of a projective billiard under orthogonal polarity.
///
/// The boundary point `Q` with parameter `t` corresponds to the point `P` of
/// the dual curve given by the coordinates of the tangent line at `Q`; the
/// tangent line to the dual curve at `P` is `L_P`, whose coordinates are `Q`.
/// The involution of `L_P` fixes `P` and the point dual to the field line.
#[derive(Debug, Clone)]
pub struct DualBilliard {
    boundary: ConicBoundary,
    field: TransversalField,
    curve: Conic,
}

/// Builds the dual curve and the family of line involutions.
pub fn dualize_billiard(boundary: &ConicBoundary, field: &TransversalField) -> Result<DualBilliard> {
    Ok(DualBilliard {
        boundary: boundary.clone(),
        field: field.clone(),
        curve: dualize_conic(boundary.conic())?,
    })
}

/// Exact data at one parameter: `Q`, `P` and the dual field point, as
/// homogeneous triples in a real type.
#[derive(Debug, Clone, Copy)]
pub struct DualFrame<R> {
    /// Homogeneous coordinates of the boundary point, i.e. of the line `L_P`.
    pub line: [R; 3],
    /// The point `P` of the dual curve.
    pub point: [R; 3],
    /// The second fixed point of `σ_P`: coordinates of the field line.
    pub partner: [R; 3],
}

impl DualBilliard {
    /// The dual curve `γ` (the adjugate of the boundary conic).
    pub fn curve(&self) -> &Conic {
        &self.curve
    }

    pub fn boundary(&self) -> &ConicBoundary {
        &self.boundary
    }

    pub fn field(&self) -> &TransversalField {
        &self.field
    }

    /// `P` for the boundary parameter `t`.
    pub fn point_at(&self, t: f64) -> HomogeneousPoint<f64> {
        let q = self.boundary.point(t);
        let v = self.boundary.tangent(t);
        HomogeneousPoint::from_vector(Vector3::from(field_line_vector(q, v)))
    }

    /// The tangent line `L_P` at `point_at(t)`.
    pub fn tangent_line_at(&self, t: f64) -> HomogeneousLine<f64> {
        let q = self.boundary.point(t);
        HomogeneousLine::new(q[0], q[1], 1.0)
    }

    /// `σ_P`: the involution of `L_P` fixing `P` and the dual of the field line.
    pub fn sigma_at(&self, t: f64) -> Result<LineInvolution> {
        if let Some(parameter) = self.field.near_excluded(&self.boundary, t, tol::EXCLUSION) {
            return Err(Error::SingularPoint { parameter });
        }
        let f = self.frame::<f64>(t)?;
        LineInvolution::from_fixed_points(
            HomogeneousLine::from_vector(Vector3::from(f.line)),
            Vector3::from(f.point),
            Vector3::from(f.partner),
        )
    }

    /// The frame at `t` in any real type; exact in double-double on the parabola.
    pub fn frame<R: Real>(&self, t: f64) -> Result<DualFrame<R>>
    where
        Self: FrameSource<R>,
    {
        <Self as FrameSource<R>>::frame_in(self, t)
    }
}

/// Boundary data in a given real type.
pub trait FrameSource<R> {
    fn frame_in(&self, t: f64) -> Result<DualFrame<R>>;
}

fn build_frame<R: Real>(x: [R; 2], v: [R; 2], n: [R; 2]) -> DualFrame<R> {
    DualFrame {
        line: [x[0], x[1], R::from(1.0)],
        point: field_line_vector(x, v),
        partner: field_line_vector(x, n),
    }
}

impl FrameSource<f64> for DualBilliard {
    fn frame_in(&self, t: f64) -> Result<DualFrame<f64>> {
        let n = self.field.direction(&self.boundary, t)?;
        Ok(build_frame(self.boundary.point(t), self.boundary.tangent(t), n))
    }
}

impl FrameSource<DoubleDouble> for DualBilliard {
    fn frame_in(&self, t: f64) -> Result<DualFrame<DoubleDouble>> {
        self.field.direction(&self.boundary, t)?;
        let n = self.field.direction_exact(&self.boundary, t);
        Ok(build_frame(
            self.boundary.point_exact(t),
            self.boundary.tangent_exact(t),
            n,
        ))
    }
}
