// Negated comparisons like `!(x > 0.0)` are used on purpose in precondition
// checks: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Experiment runner and command-line surface for the shiftdim toolkit.

pub mod config;
pub mod csvout;
pub mod experiments;
pub mod run;

pub use config::{Config, ExperimentKind, MeasureKind};
pub use csvout::{Curve, OutputSet, Row};
pub use experiments::ExperimentOutcome;
