//! One-off estimator subcommands sharing the experiment configuration.

use anyhow::{bail, Result};
use shiftdim_core::corrsum::correlation_sum_detailed;
use shiftdim_core::covering::{covering_sum_greedy, mollified_covering_sum};
use shiftdim_core::energy::{
    energy_mc_bracketed, markov_energy_closed_form, periodic_ball_energy_exact,
};
use shiftdim_core::measure::mix_seed;
use shiftdim_core::metric::window_cutoff;
use shiftdim_core::ShiftMeasure;

use crate::config::Config;
use crate::csvout::{OutputSet, Row};

/// Energy estimates across the grid: exact values for periodic measures,
/// windowed closed form plus the Monte-Carlo bracket for Markov measures.
pub fn run_energy(config: &Config) -> Result<OutputSet> {
    let name = "energy";
    let measure = config.build_measure()?;
    if !(config.q > 1.0) {
        bail!("energy needs q > 1");
    }
    let mut output = OutputSet::default();
    for &eps in config.build_grid()?.radii() {
        match &measure {
            ShiftMeasure::Periodic(p) => {
                let value = periodic_ball_energy_exact(p, config.q, eps)?;
                output.rows.push(Row {
                    experiment: name.into(),
                    method: "exact_cylinder".into(),
                    eps,
                    n: p.period() as u64,
                    q: config.q,
                    value,
                    stderr: 0.0,
                    n_samples: p.period() as u64,
                    seed: config.seed,
                    flag: "ok".into(),
                });
            }
            ShiftMeasure::Markov(mk) => {
                let sep = measure.min_separation()?.min(1.0);
                if eps >= sep {
                    output.rows.push(Row {
                        experiment: name.into(),
                        method: "closed_form".into(),
                        eps,
                        n: 0,
                        q: config.q,
                        value: f64::NAN,
                        stderr: 0.0,
                        n_samples: 0,
                        seed: config.seed,
                        flag: "above_separation".into(),
                    });
                    continue;
                }
                let n0 = window_cutoff(eps)?;
                let closed =
                    markov_energy_closed_form(mk.state_count(), mk.kappa(), config.q, n0)?;
                output.rows.push(Row {
                    experiment: name.into(),
                    method: "closed_form".into(),
                    eps,
                    n: n0 as u64,
                    q: config.q,
                    value: closed,
                    stderr: 0.0,
                    n_samples: 1,
                    seed: config.seed,
                    flag: "window_upper".into(),
                });
                let bracket = energy_mc_bracketed(
                    mk,
                    config.q,
                    eps,
                    config.budget_samples as usize,
                    mix_seed(config.seed, 0xE0E0),
                )?;
                for (est, label) in [
                    (&bracket.lower, "bracket_lower"),
                    (&bracket.midpoint, "bracket_mid"),
                    (&bracket.upper, "bracket_upper"),
                ] {
                    output.rows.push(Row {
                        experiment: name.into(),
                        method: est.method.as_str().into(),
                        eps,
                        n: bracket.cutoff_window as u64,
                        q: config.q,
                        value: est.value,
                        stderr: est.stderr,
                        n_samples: est.n_samples,
                        seed: est.seed,
                        flag: label.into(),
                    });
                }
            }
        }
    }
    Ok(output)
}

/// Correlation sums across the grid for one orbit; the segment length is
/// `budget.samples`.
pub fn run_corrsum(config: &Config) -> Result<OutputSet> {
    let name = "corrsum";
    let measure = config.build_measure()?;
    let q = config.q;
    if q.fract() != 0.0 || q < 2.0 {
        bail!("corrsum needs an integer q >= 2");
    }
    let qi = q as u32;
    let n = config.budget_samples as usize;
    let point = match &measure {
        ShiftMeasure::Periodic(p) => p.atom(0),
        ShiftMeasure::Markov(mk) => mk.sample_orbit(n + 80, mix_seed(config.seed, 0xC0)),
    };
    let mut output = OutputSet::default();
    for &eps in config.build_grid()?.radii() {
        let (value, ambiguous) = correlation_sum_detailed(&point, qi, n, eps, 4096)?;
        output.rows.push(Row {
            experiment: name.into(),
            method: "clique_count".into(),
            eps,
            n: n as u64,
            q,
            value,
            stderr: 0.0,
            n_samples: ambiguous,
            seed: config.seed,
            flag: if value > 0.0 { "ok" } else { "zero" }.into(),
        });
    }
    Ok(output)
}

/// Covering-sum upper bounds across the grid; the `q` key supplies the
/// covering exponent.
pub fn run_cover(config: &Config) -> Result<OutputSet> {
    let name = "cover";
    let measure = config.build_measure()?;
    let s = config.q;
    if !(s > 0.0 && s < 1.0) {
        bail!("cover uses the q key as the covering exponent in (0, 1)");
    }
    let mut output = OutputSet::default();
    for &eps in config.build_grid()?.radii() {
        for (result, label) in [
            (covering_sum_greedy(&measure, s, eps, config.budget_cylinders), "ball"),
            (
                mollified_covering_sum(&measure, s, eps, config.budget_cylinders),
                "mollified",
            ),
        ] {
            match result {
                Ok(report) => output.rows.push(Row {
                    experiment: name.into(),
                    method: report.method.as_str().into(),
                    eps,
                    n: 0,
                    q: s,
                    value: report.value,
                    stderr: 0.0,
                    n_samples: report.n_samples,
                    seed: config.seed,
                    flag: label.into(),
                }),
                Err(shiftdim_core::Error::BudgetExceeded { .. }) => {
                    output.rows.push(Row {
                        experiment: name.into(),
                        method: "greedy_cover".into(),
                        eps,
                        n: 0,
                        q: s,
                        value: f64::NAN,
                        stderr: 0.0,
                        n_samples: 0,
                        seed: config.seed,
                        flag: format!("{label}_budget_exceeded"),
                    });
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(output)
}
