//! Sandwich chains on periodic measures.
//!
//! Two inequality chains are driven in exact arithmetic:
//!
//! * the mollified energy sandwich `J(q, eps) <= I(q, eps) <= J(q, 2 eps)`
//!   across the grid scales;
//! * the covering chain `I(s, eps) <= S*(s, eps/2) <= W*(s, eps/2) <=
//!   S*(s, eps)` with `S*`, `W*` exact infima over a finite candidate-center
//!   net (atoms plus single-coordinate mutations), checked against the
//!   greedy upper bound.
//!
//! Every row carries its own PASS/FAIL flag; any violation fails the run.

use anyhow::{bail, Result};
use shiftdim_core::covering::{covering_sum_greedy, exhaustive_net_infimum, CoverCost};
use shiftdim_core::energy::{
    periodic_ball_energy_exact, periodic_mollified_energy_exact,
};
use shiftdim_core::measure::PeriodicOrbitMeasure;
use shiftdim_core::{Extension, SeqWindow, ShiftMeasure};

use crate::config::Config;
use crate::csvout::{OutputSet, Row};
use crate::experiments::ExperimentOutcome;

/// Covering exponent for the chain check.
const COVER_EXPONENT: f64 = 0.5;
/// Slack for exact-arithmetic comparisons.
const EXACT_SLACK: f64 = 1e-12;
/// Chain scales, chosen off the weight values so every ball-membership
/// decision is far from the distance resolution.
const CHAIN_SCALES: [f64; 3] = [0.37, 0.13, 0.05];

/// A wide window denoting the `i`-th atom, leaving room for far-coordinate
/// mutations while the tails stay periodic.
fn wide_atom(p: &PeriodicOrbitMeasure, i: usize, half: usize) -> SeqWindow {
    let k = p.period() as i64;
    let symbols: Vec<u16> = (-(half as i64)..=half as i64)
        .map(|c| p.word()[(c - i as i64).rem_euclid(k) as usize])
        .collect();
    SeqWindow::from_parts(
        p.alphabet().clone(),
        symbols,
        Extension::Periodic { period: p.period() },
    )
    .expect("window from a validated orbit word")
}

/// Candidate-center net: atoms, near-atom centers (mutations at far
/// coordinates, within the radius of their atom) and decoys (mutations at
/// the center, covering nothing at sub-separation radii).
fn candidate_net(p: &PeriodicOrbitMeasure, cap: usize) -> Vec<SeqWindow> {
    let mut net = p.atoms();
    let alphabet_len = p.alphabet().len() as u16;
    'outer: for coord in [5i64, 6, 7, -5, -6, 0] {
        for i in 0..p.period() {
            let atom = wide_atom(p, i, 9);
            for sym in 0..alphabet_len {
                if sym != atom.coordinate(coord) {
                    net.push(atom.with_symbol_at(coord, sym).expect("in-window coordinate"));
                    if net.len() >= cap {
                        break 'outer;
                    }
                }
            }
        }
    }
    net
}

pub fn run_sandwich(config: &Config) -> Result<ExperimentOutcome> {
    let name = "sandwich";
    let measure = config.build_measure()?;
    let ShiftMeasure::Periodic(p) = &measure else {
        bail!("{name} needs a periodic measure");
    };
    if !(config.q > 1.0) {
        bail!("{name} needs q > 1");
    }
    if p.period() > 12 {
        bail!("{name} needs an orbit of period at most 12");
    }
    let q = config.q;

    let mut output = OutputSet::default();
    let mut pass = true;

    // Mollified energy sandwich across the grid.
    for &eps in config.build_grid()?.radii() {
        let j1 = periodic_mollified_energy_exact(p, q, eps)?;
        let i1 = periodic_ball_energy_exact(p, q, eps)?;
        let j2 = periodic_mollified_energy_exact(p, q, 2.0 * eps)?;
        let ok = j1 <= i1 + EXACT_SLACK && i1 <= j2 + EXACT_SLACK;
        if !ok {
            pass = false;
        }
        for (value, label) in [(j1, "mollified"), (i1, "energy"), (j2, "mollified_2eps")] {
            output.rows.push(Row {
                experiment: name.into(),
                method: "exact_cylinder".into(),
                eps,
                n: p.period() as u64,
                q,
                value,
                stderr: 0.0,
                n_samples: p.period() as u64,
                seed: config.seed,
                flag: label.into(),
            });
        }
        output.rows.push(Row {
            experiment: name.into(),
            method: "exact_cylinder".into(),
            eps,
            n: p.period() as u64,
            q,
            value: (j2 - j1).max(0.0),
            stderr: 0.0,
            n_samples: p.period() as u64,
            seed: config.seed,
            flag: if ok { "PASS" } else { "FAIL" }.into(),
        });
    }

    // Covering chain against exhaustive net infima on the same instance.
    let net = candidate_net(p, 200);
    let s = COVER_EXPONENT;
    for &eps in &CHAIN_SCALES {
        let energy = periodic_ball_energy_exact(p, s, eps)?;
        let s_half = exhaustive_net_infimum(&measure, s, eps / 2.0, &net, CoverCost::BallMass)?;
        let w_half = exhaustive_net_infimum(&measure, s, eps / 2.0, &net, CoverCost::Mollified)?;
        let s_full = exhaustive_net_infimum(&measure, s, eps, &net, CoverCost::BallMass)?;
        let greedy = covering_sum_greedy(&measure, s, eps, config.budget_cylinders)?;
        let ok = energy <= s_half + EXACT_SLACK
            && s_half <= w_half + EXACT_SLACK
            && w_half <= s_full + EXACT_SLACK
            && greedy.value >= s_full - EXACT_SLACK;
        if !ok {
            pass = false;
        }
        for (value, method, label) in [
            (energy, "exact_cylinder", "energy"),
            (s_half, "exact_cylinder", "net_cover_half"),
            (w_half, "exact_cylinder", "net_mollified_half"),
            (s_full, "exact_cylinder", "net_cover"),
            (greedy.value, "greedy_cover", "greedy_cover"),
        ] {
            output.rows.push(Row {
                experiment: name.into(),
                method: method.into(),
                eps,
                n: net.len() as u64,
                q: s,
                value,
                stderr: 0.0,
                n_samples: net.len() as u64,
                seed: config.seed,
                flag: label.into(),
            });
        }
        output.rows.push(Row {
            experiment: name.into(),
            method: "exact_cylinder".into(),
            eps,
            n: net.len() as u64,
            q: s,
            value: s_full - energy,
            stderr: 0.0,
            n_samples: net.len() as u64,
            seed: config.seed,
            flag: if ok { "PASS" } else { "FAIL" }.into(),
        });
    }

    Ok(ExperimentOutcome {
        name: "sandwich",
        output,
        pass,
    })
}
