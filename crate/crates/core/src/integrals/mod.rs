//! Moment vectors, rational 0-homogeneous integrals and conservation checks.

mod canonical;
mod check;
mod moment;
mod rational;

pub use canonical::{canonical_integral, invariant_curve_integral, pencil_ratio_integral};
pub use check::{
    check_dual_invariance, check_reflection_invariance, verdicts_agree, InvarianceReport, SamplingOptions,
};
pub use moment::{moment_vector, MomentVector};
pub use rational::RationalIntegral;
