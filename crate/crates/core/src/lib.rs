//! Entanglement measures on multiqubit states and numerical checks of
//! α-power monogamy and polygamy inequalities.
//!
//! * [`linalg`]: pure and mixed states, partial trace and transpose, trace norm,
//!   Schmidt spectra, GHZ/W and Haar-random factories, JSON state files.
//! * [`measures`]: concurrence, negativity, convex-roof extended negativity and
//!   entanglement of formation.
//! * [`convexroof`]: upper bounds on convex roofs by descent over ensemble isometries.
//! * [`monogamy`]: residual tangles, hierarchical residuals, α sweeps and the
//!   GHZ/W closed forms.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexroof;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod policy;

pub use error::{Error, Result};
pub use measures::{MeasureId, MeasureValue};
