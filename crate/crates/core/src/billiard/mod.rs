//! Billiard tables, transversal line fields, the projective billiard map,
//! constant-curvature surface models and dual billiards.

mod boundary;
mod dual;
mod dynamics;
mod field;
mod surface;

pub use boundary::{Boundary, ConicBoundary, QuarticOval};
pub use dual::{dualize_billiard, DualBilliard, DualFrame, FrameSource};
pub use dynamics::{billiard_step, orbit, reflect_at, Orbit, PhaseState, StepOutcome};
pub(crate) use field::field_line_vector;
pub use field::{exotic_tangency_locus, transversal_field_eval, ExoticCase, FieldKind, TransversalField};
pub use surface::{
    form_value, lift_to_surface, project_pi, surface_billiard_step, SurfaceBoundary, SurfaceModel, SurfaceState,
};
