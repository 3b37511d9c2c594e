use thiserror::Error;

/// Everything that can go wrong inside the geometry kernel.
///
/// Variants carry the measured residual where one exists so callers can tell
/// a near miss from a gross violation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector where a projective element or direction was required")]
    ZeroVector,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("elements do not lie in one pencil (residual {residual:.3e})")]
    NotInPencil { residual: f64 },
    #[error("degenerate quadruple: reference elements coincide")]
    DegenerateQuadruple,
    #[error("lines are not concurrent (residual {residual:.3e})")]
    NotConcurrent { residual: f64 },
    #[error("degenerate pencil: the two fixed lines coincide")]
    DegeneratePencil,
    #[error("conic is degenerate (rank < 3)")]
    DegenerateConic,
    #[error("projective map is singular")]
    SingularMap,
    #[error("eigenlines of the involution coincide")]
    CoincidentEigenlines,
    #[error("line does not pass through the base point (residual {residual:.3e})")]
    NotThroughPoint { residual: f64 },
    #[error("restriction of the quadratic form to the plane is degenerate")]
    DegenerateRestriction,
    #[error("line is tangent: the intersection pair collapses")]
    TangentLine,
    #[error("line is contained in the conic")]
    LineInConic,
    #[error("fixed point lies on the conic (base point of the pencil)")]
    BasePoint,
    #[error("involution has no real representative")]
    NonReal,
    #[error("point is within the excluded neighbourhood of a singular parameter {parameter}")]
    SingularPoint { parameter: f64 },
    #[error("point is not on the boundary (residual {residual:.3e})")]
    OffBoundary { residual: f64 },
    #[error("line does not meet the boundary ahead of the base point")]
    NoIntersection,
    #[error("reflection is singular at parameter {parameter}")]
    SingularReflection { parameter: f64 },
    #[error("point lies outside the domain of the surface model")]
    OutsideDomain,
    #[error("velocity is zero")]
    ZeroVelocity,
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("moment vector lies on the polar locus of the integral")]
    OnPolarLocus,
    #[error("the two conics are proportional")]
    ProportionalConics,
    #[error("polynomial is not homogeneous of the declared degree")]
    NotHomogeneous,
    #[error("pencil member is singular at lambda = {lambda}")]
    SingularParameter { lambda: f64 },
    #[error("implicit curve is singular near the sampled point")]
    SingularCurvePoint,
    #[error("tangent plane is self-orthogonal for the form")]
    SelfOrthogonalTangent,
    #[error("the form's conic coincides with the boundary conic")]
    AlphaEqualsC,
    #[error("unsupported form signature ({positive}, {negative}, {zero})")]
    UnsupportedSignature {
        positive: usize,
        negative: usize,
        zero: usize,
    },
    #[error("no arc of the boundary lifts to the surface")]
    LiftDomainEmpty,
    #[error("expected rank 1, found rank {rank}")]
    RankMismatch { rank: usize },
    #[error("degenerate limit did not converge")]
    NoConvergence,
    #[error("conic type not supported for a parameterized boundary")]
    UnsupportedConic,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
