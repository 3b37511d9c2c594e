//! Confocal and dual pencils, caustic and invariant-curve checks, and the
//! tangential correspondence.

mod check;
mod correspondence;
mod pencil;

pub use check::{check_absolute_caustic, check_complex_caustic, check_invariant_curve, CausticReport};
pub use correspondence::{contact_point, tangential_correspondence_samples, ArcBox, ImplicitCurve, TangentialPair};
pub use pencil::{ConfocalPencil, DualPencilFamily};
