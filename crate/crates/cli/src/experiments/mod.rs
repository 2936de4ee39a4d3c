//! Experiment drivers.
//!
//! Each driver validates its configuration, runs the relevant estimators,
//! and returns rows plus plot curves together with a PASS/FAIL verdict.
//! Rows never substitute methods silently: every row names the method that
//! produced it and the seed it consumed.

mod divergence;
mod periodic_lower;
mod pesin;
mod recurrence;
mod sandwich;

use anyhow::{bail, Result};

use crate::config::{Config, ExperimentKind};
use crate::csvout::OutputSet;

pub use divergence::run_divergence;
pub use periodic_lower::run_periodic_lower;
pub use pesin::run_pesin;
pub use recurrence::run_recurrence;
pub use sandwich::run_sandwich;

/// Result of one experiment: output files' content and the verdict.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub name: &'static str,
    pub output: OutputSet,
    pub pass: bool,
}

/// Runs the experiment named in the configuration.
pub fn run(config: &Config) -> Result<ExperimentOutcome> {
    let Some(kind) = config.experiment else {
        bail!("config has no `experiment` key");
    };
    match kind {
        ExperimentKind::PesinConvergence => run_pesin(config),
        ExperimentKind::Divergence => run_divergence(config),
        ExperimentKind::PeriodicLower => run_periodic_lower(config),
        ExperimentKind::Sandwich => run_sandwich(config),
        ExperimentKind::Recurrence => run_recurrence(config),
    }
}
