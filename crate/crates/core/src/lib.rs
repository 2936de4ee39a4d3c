// Negated comparisons like `!(x > 0.0)` are used on purpose in precondition
// checks: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! shiftdim: numerical dimension theory on bilateral sequence spaces.
//!
//! The toolkit implements, at desk scale, the computable objects attached to
//! the full shift over a finite embedded alphabet under a sub-exponential
//! metric: exact shift-invariant measures (periodic orbits and cyclically
//! perturbed Markov chains), energy functions with cylinder bracketing,
//! mollified and covering sums, correlation sums over orbit segments,
//! generalized-dimension quotient series, and return-time statistics.

pub mod alphabet;
pub mod corrsum;
pub mod covering;
pub mod energy;
pub mod error;
pub mod gfd;
pub mod grid;
pub mod measure;
pub mod metric;
pub mod recurrence;
pub mod report;
pub mod window;

pub use alphabet::{Alphabet, Symbol};
pub use error::{Error, Result};
pub use grid::{GridKind, ScaleGrid};
pub use measure::{
    CylinderWord, MarkovMeasure, PeriodicOrbitMeasure, ShiftMeasure, DEFAULT_CYLINDER_BUDGET,
};
pub use report::{EstimateReport, Method, SlopePoint, SlopeSeries};
pub use window::{Extension, SeqWindow};
