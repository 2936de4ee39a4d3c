//! Return-time statistics along one orbit.
//!
//! For a periodic configuration the point is the base periodic sequence and
//! every quotient is exact; for a Markov configuration a sampled path is
//! scanned. The horizon comes from `budget.samples`. Scales with no hit
//! inside the horizon, or with a distance decision inside the tail
//! resolution of the radius, are flagged and excluded from the proxies.

use anyhow::{bail, Result};
use shiftdim_core::measure::mix_seed;
use shiftdim_core::recurrence::recurrence_rates;
use shiftdim_core::ShiftMeasure;

use crate::config::Config;
use crate::csvout::{Curve, OutputSet, Row};
use crate::experiments::ExperimentOutcome;

pub fn run_recurrence(config: &Config) -> Result<ExperimentOutcome> {
    let name = "recurrence";
    let measure = config.build_measure()?;
    let horizon = config.budget_samples;
    if horizon == 0 {
        bail!("{name} needs budget.samples >= 1 as the horizon");
    }
    let point = match &measure {
        ShiftMeasure::Periodic(p) => p.atom(0),
        ShiftMeasure::Markov(mk) => mk.sample_orbit(64, mix_seed(config.seed, 0x4EC2)),
    };
    let grid = config.build_grid()?;
    let rates = recurrence_rates(&point, &grid, horizon, 4096)?;

    let mut output = OutputSet::default();
    let mut curve = Vec::new();
    for p in &rates.points {
        let flag = if p.record.indeterminate {
            "indeterminate"
        } else if p.record.tau.is_some() {
            "found"
        } else {
            "not_found"
        };
        output.rows.push(Row {
            experiment: name.into(),
            method: "clique_count".into(),
            eps: p.record.radius,
            n: p.record.tau.unwrap_or(0),
            q: config.q,
            value: p.quotient.unwrap_or(f64::NAN),
            stderr: 0.0,
            n_samples: horizon,
            seed: config.seed,
            flag: flag.into(),
        });
        if let Some(q) = p.quotient {
            curve.push((p.record.radius, q));
        }
    }
    for (value, label) in [(rates.lower, "lower_proxy"), (rates.upper, "upper_proxy")] {
        output.rows.push(Row {
            experiment: name.into(),
            method: "clique_count".into(),
            eps: 0.0,
            n: 0,
            q: config.q,
            value,
            stderr: 0.0,
            n_samples: horizon,
            seed: config.seed,
            flag: label.into(),
        });
    }
    output.curves.push(Curve {
        name: "recurrence_quotient".into(),
        points: curve,
    });

    // recurrence_rates errors when every scale is excluded, so reaching
    // this point means the proxies exist.
    Ok(ExperimentOutcome {
        name: "recurrence",
        output,
        pass: true,
    })
}
