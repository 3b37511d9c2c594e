//! Billiards in conics, their projective and dual generalisations, and the
//! numerical machinery that certifies their integrability: reflection laws,
//! orthogonal polarity, conic pencils, rational first integrals and
//! complex-caustic checks.
//!
//! The modules build on each other bottom-up:
//!
//! * [`projgeo`]: homogeneous points, lines and conics over ℝ or ℂ.
//! * [`reflectors`]: the reflection involutions (mirror, projective, form-preserving, line).
//! * [`billiard`]: tables, transversal fields, stepping, surface models, duals.
//! * [`integrals`]: moment vectors, rational integrals and conservation checks.
//! * [`caustics`]: confocal and dual pencils, caustic and invariant-curve checks.
//! * [`pencil_equivalence`]: form normalization and the constant-curvature picture.
//! * [`expcli`]: scenario files, CSV reports and SVG plots.

pub mod billiard;
pub mod caustics;
pub mod dd;
pub mod error;
pub mod expcli;
pub mod integrals;
pub mod pencil_equivalence;
pub mod poly;
pub mod projgeo;
pub mod reflectors;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use num_complex::Complex64;
