//! Return times and recurrence rates.
//!
//! The return time at radius `s` is the first shift count `k >= 1` whose
//! image lands strictly inside the `s`-ball around the starting point. The
//! infimum over an infinite orbit is not computable, so the search is
//! horizon-bounded with an explicit not-found value. Per-scale quotients
//! `log tau / (-log s)` proxy the lower and upper recurrence rates.

use crate::error::{Error, Result};
use crate::grid::ScaleGrid;
use crate::metric::{
    coordinate_weight, distance_eventually_periodic, tail_bound,
};
use crate::window::SeqWindow;

/// Default decision depth for lag comparisons on sampled paths.
pub const DEFAULT_LAG_DEPTH: usize = 4096;

/// Outcome of one horizon-bounded return-time search.
#[derive(Debug, Clone, Copy)]
pub struct ReturnRecord {
    pub radius: f64,
    /// First hit in `1..=horizon`, or `None` when the horizon was exhausted.
    pub tau: Option<u64>,
    pub horizon: u64,
    /// True when some lag before the first hit could not be classified
    /// within the decision depth; the scale should then be excluded.
    pub indeterminate: bool,
}

/// How the self-distance at one lag compares to the radius.
enum LagOutcome {
    Inside,
    Outside,
    Unresolved,
}

/// `r(shift^k x, x)` versus `s`, strictly. The lag-`k` self-distance pairs
/// coordinate `m` with coordinate `m - k`, so one realized array serves all
/// lags.
fn classify_lag(
    symbols: &[crate::alphabet::Symbol],
    lo: i64,
    alphabet: &crate::alphabet::Alphabet,
    k: u64,
    s: f64,
    margin: usize,
) -> LagOutcome {
    let sym = |coord: i64| symbols[(coord - lo) as usize];
    let k = k as i64;
    let mut partial = alphabet.dist(sym(-k), sym(0)).min(1.0);
    let mut depth = 0usize;
    loop {
        if partial >= s {
            return LagOutcome::Outside;
        }
        if depth > 0 && partial + tail_bound(depth) < s {
            return LagOutcome::Inside;
        }
        if depth >= margin {
            return LagOutcome::Unresolved;
        }
        depth += 1;
        let w = coordinate_weight(depth as i64);
        let d = depth as i64;
        partial += alphabet.dist(sym(d - k), sym(d)).min(w);
        partial += alphabet.dist(sym(-d - k), sym(-d)).min(w);
    }
}

/// First return of a point to its own open `s`-ball within the horizon.
pub fn return_time(x: &SeqWindow, s: f64, horizon: u64, margin: usize) -> Result<ReturnRecord> {
    if !(s > 0.0) {
        return Err(Error::ScaleOutOfRange(s));
    }
    if horizon < 1 {
        return Err(Error::Parameter("horizon must be at least 1".into()));
    }
    // A periodic point's lag distances repeat with its period; classify one
    // period exactly and look the rest up.
    if let Some(p) = x.sequence_period() {
        let mut inside = vec![false; p];
        let mut indeterminate = false;
        for rem in 0..p {
            if rem == 0 {
                inside[0] = true; // lag multiple of the period: distance 0
                continue;
            }
            let shifted = x.shifted(rem as i64);
            let (v, err) =
                distance_eventually_periodic(x, &shifted).expect("periodic windows");
            if v + err < s {
                inside[rem] = true;
            } else if v - err < s {
                indeterminate = true;
            }
        }
        for k in 1..=horizon {
            let rem = (k % p as u64) as usize;
            if inside[rem] {
                return Ok(ReturnRecord {
                    radius: s,
                    tau: Some(k),
                    horizon,
                    indeterminate,
                });
            }
            if indeterminate {
                break;
            }
        }
        return Ok(ReturnRecord {
            radius: s,
            tau: None,
            horizon,
            indeterminate,
        });
    }
    let margin = margin.max(64);
    let lo = -(margin as i64) - horizon as i64;
    let hi = margin as i64;
    let symbols = x.realize(lo, hi);
    let alphabet = x.alphabet().clone();
    for k in 1..=horizon {
        match classify_lag(&symbols, lo, &alphabet, k, s, margin) {
            LagOutcome::Inside => {
                return Ok(ReturnRecord {
                    radius: s,
                    tau: Some(k),
                    horizon,
                    indeterminate: false,
                })
            }
            LagOutcome::Outside => {}
            LagOutcome::Unresolved => {
                return Ok(ReturnRecord {
                    radius: s,
                    tau: None,
                    horizon,
                    indeterminate: true,
                })
            }
        }
    }
    Ok(ReturnRecord {
        radius: s,
        tau: None,
        horizon,
        indeterminate: false,
    })
}

/// One scale of a recurrence-rate series.
#[derive(Debug, Clone, Copy)]
pub struct RatePoint {
    pub record: ReturnRecord,
    /// `log tau / (-log s)`; `None` for not-found or indeterminate scales.
    pub quotient: Option<f64>,
}

/// Finite-scale recurrence rates over a grid.
#[derive(Debug, Clone)]
pub struct RecurrenceRates {
    pub points: Vec<RatePoint>,
    /// Smallest quotient over usable scales (lower-rate proxy).
    pub lower: f64,
    /// Largest quotient over usable scales (upper-rate proxy).
    pub upper: f64,
}

/// Return times and quotients across a scale grid.
///
/// Scales with no hit inside the horizon or with an indeterminate decision
/// are flagged and excluded from the proxies; if every scale is excluded the
/// search fails.
pub fn recurrence_rates(
    x: &SeqWindow,
    grid: &ScaleGrid,
    horizon: u64,
    margin: usize,
) -> Result<RecurrenceRates> {
    let mut points = Vec::with_capacity(grid.len());
    for &s in grid.radii() {
        let record = return_time(x, s, horizon, margin)?;
        let quotient = match (record.tau, record.indeterminate) {
            (Some(tau), false) => Some((tau as f64).ln() / -s.ln()),
            _ => None,
        };
        points.push(RatePoint { record, quotient });
    }
    let usable: Vec<f64> = points.iter().filter_map(|p| p.quotient).collect();
    if usable.is_empty() {
        return Err(Error::NoReturnFound);
    }
    let lower = usable.iter().cloned().fold(f64::INFINITY, f64::min);
    let upper = usable.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(RecurrenceRates {
        points,
        lower,
        upper,
    })
}
