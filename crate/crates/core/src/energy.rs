//! Energy functions: exact windowed sums, the closed form for the perturbed
//! Markov family, Monte-Carlo estimates with cylinder bracketing, and the
//! mollified variants.
//!
//! The energy of order `q > 1` at radius `eps` integrates the ball mass to
//! the power `q-1` against the measure. For the implemented measures and
//! radii below the support separation, ball masses are controlled by
//! coordinate windows on both sides:
//!
//! * depth `window_cutoff(eps)` — the metric ball sits inside the coordinate
//!   ball of that depth, giving an upper bound by a cylinder mass;
//! * depth `inner_window(eps)` — the cylinder of that depth sits inside the
//!   metric ball, giving a lower bound.
//!
//! True ball masses for Markov measures are bracketed, never claimed exact.
//! Periodic measures have finite support, so their energies are exact finite
//! sums at every radius.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{
    mix_seed, CylinderWord, MarkovMeasure, PeriodicOrbitMeasure, ShiftMeasure,
    DEFAULT_CYLINDER_BUDGET,
};
use crate::metric::{
    compare_threshold, distance, distance_eventually_periodic, inner_window, tail_bound,
    window_cutoff, ThresholdOutcome,
};
use crate::report::{mean_and_stderr, EstimateReport, Method};
use crate::window::SeqWindow;

/// Depth cap for threshold decisions in sampled-path comparisons.
pub const DEFAULT_DECISION_DEPTH: usize = 8192;

/// Deeper cap used when a mollifier value in the linear zone must be
/// resolved numerically rather than classified.
const KERNEL_REFINE_DEPTH: usize = 262_144;

/// Exact windowed energy: the sum of `q`-th powers of depth-`n` cylinder
/// masses over all words in the support alphabet.
///
/// Valid as the common value of the windowed energy for every radius below
/// the support separation. This is the enumeration route; the closed form
/// below is its independent counterpart for the Markov family.
pub fn windowed_energy_exact(m: &ShiftMeasure, q: f64, n: usize, budget: u64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    let masses = m.enumerate_cylinder_masses(n, budget)?;
    Ok(masses.iter().map(|p| p.powf(q)).sum())
}

/// Closed form of the windowed energy for the perturbed Markov family:
/// `s^{1-q} * ((s-1)^{1-q} kappa^q + (1-kappa)^q)^{2n}`.
pub fn markov_energy_closed_form(s: usize, kappa: f64, q: f64, n: usize) -> Result<f64> {
    if s < 2 {
        return Err(Error::DegenerateSupport);
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    Ok(markov_energy_closed_form_any_order(s, kappa, q, n))
}

/// The same expression without the `q > 1` fence; the derivation only uses
/// the row power sums, so it holds for any real order.
pub(crate) fn markov_energy_closed_form_any_order(
    s: usize,
    kappa: f64,
    q: f64,
    n: usize,
) -> f64 {
    let sf = s as f64;
    let a = (sf - 1.0).powf(1.0 - q) * kappa.powf(q) + (1.0 - kappa).powf(q);
    sf.powf(1.0 - q) * a.powf(2.0 * n as f64)
}

/// Expected log cylinder mass at depth `n` for the Markov family:
/// `-ln s + 2n * sum_j p_ij ln p_ij`. Used by the order-1 (entropy) proxy.
pub fn markov_windowed_log_energy(m: &MarkovMeasure, n: usize) -> f64 {
    -(m.state_count() as f64).ln() + 2.0 * n as f64 * m.row_log_mean()
}

/// Exact masses of the atom-centered metric balls of a periodic measure.
///
/// `mass_i = #{j : r(atom_i, atom_j) < eps} / k`. Atom pair distances are
/// eventually periodic, hence computable to ~1e-8; a radius that close to an
/// atom distance is rejected rather than silently classified.
pub fn periodic_atom_ball_masses(p: &PeriodicOrbitMeasure, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let atoms = p.atoms();
    let k = atoms.len();
    let mut masses = vec![0.0; k];
    for i in 0..k {
        let mut count = 0usize;
        for j in 0..k {
            if i == j {
                count += 1;
                continue;
            }
            let (v, err) = distance_eventually_periodic(&atoms[i], &atoms[j])
                .expect("atoms have periodic tails");
            if v + err < eps {
                count += 1;
            } else if v - err < eps {
                return Err(Error::Parameter(format!(
                    "radius {eps} is within the distance resolution of an atom pair"
                )));
            }
        }
        masses[i] = count as f64 / k as f64;
    }
    Ok(masses)
}

/// Exact ball energy of a periodic measure: `sum_i (1/k) mass_i^{q-1}`.
pub fn periodic_ball_energy_exact(p: &PeriodicOrbitMeasure, q: f64, eps: f64) -> Result<f64> {
    let masses = periodic_atom_ball_masses(p, eps)?;
    let k = masses.len() as f64;
    Ok(masses.iter().map(|m| m.powf(q - 1.0)).sum::<f64>() / k)
}

/// Exact log-integrand of a periodic measure: `sum_i (1/k) ln mass_i`.
pub fn periodic_log_energy_exact(p: &PeriodicOrbitMeasure, eps: f64) -> Result<f64> {
    let masses = periodic_atom_ball_masses(p, eps)?;
    let k = masses.len() as f64;
    Ok(masses.iter().map(|m| m.ln()).sum::<f64>() / k)
}

/// Monte-Carlo energy bracket for a Markov measure at a sub-separation
/// radius.
///
/// Every outer sample is a seeded stationary path; its ball mass is bracketed
/// by the exact masses of the containing cutoff-window cylinder (upper) and
/// the contained inner-window cylinder (lower). The midpoint estimator
/// averages the midpoints of the per-sample power brackets.
#[derive(Debug, Clone)]
pub struct EnergyBracket {
    pub lower: EstimateReport,
    pub upper: EstimateReport,
    pub midpoint: EstimateReport,
    /// Depth of the containing window (`window_cutoff(eps)`).
    pub cutoff_window: usize,
    /// Depth of the contained window (`inner_window(eps)`).
    pub inner_window: usize,
}

pub fn energy_mc_bracketed(
    m: &MarkovMeasure,
    q: f64,
    eps: f64,
    n_outer: usize,
    seed: u64,
) -> Result<EnergyBracket> {
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    if n_outer < 100 {
        return Err(Error::Parameter("n_outer must be at least 100".into()));
    }
    let measure = ShiftMeasure::Markov(m.clone());
    let sep = measure.min_separation()?;
    if !(eps > 0.0 && eps < sep.min(1.0)) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let n0 = window_cutoff(eps)?;
    let n1 = inner_window(eps)?;
    debug_assert!(n1 > n0);
    let samples: Vec<(f64, f64)> = (0..n_outer)
        .into_par_iter()
        .map(|i| {
            let x = m.sample_orbit(n1, mix_seed(seed, 0xA11C_E000 + i as u64));
            let hi = measure.cylinder_mass(&CylinderWord::from_window(&x, n0));
            let lo = measure.cylinder_mass(&CylinderWord::from_window(&x, n1));
            (lo.powf(q - 1.0), hi.powf(q - 1.0))
        })
        .collect();
    let lo_pows: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let hi_pows: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mid_pows: Vec<f64> = samples.iter().map(|s| (s.0 + s.1) / 2.0).collect();
    let make = |vals: &[f64]| {
        let (mean, stderr) = mean_and_stderr(vals);
        EstimateReport {
            value: mean,
            stderr,
            n_samples: n_outer as u64,
            seed,
            eps,
            method: Method::MonteCarlo,
        }
    };
    Ok(EnergyBracket {
        lower: make(&lo_pows),
        upper: make(&hi_pows),
        midpoint: make(&mid_pows),
        cutoff_window: n0,
        inner_window: n1,
    })
}

/// Energy estimate at radius `eps`.
///
/// Periodic measures are exact at any radius. Markov measures below the
/// separation use the cylinder bracket and report its midpoint; above the
/// separation an inner empirical sample estimates each ball mass directly.
pub fn energy_mc(
    m: &ShiftMeasure,
    q: f64,
    eps: f64,
    n_outer: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    match m {
        ShiftMeasure::Periodic(p) => {
            let value = periodic_ball_energy_exact(p, q, eps)?;
            Ok(EstimateReport {
                value,
                stderr: 0.0,
                n_samples: p.period() as u64,
                seed,
                eps,
                method: Method::ExactCylinder,
            })
        }
        ShiftMeasure::Markov(mk) => {
            let sep = m.min_separation()?;
            if eps < sep.min(1.0) {
                if n_outer < 100 {
                    return Err(Error::Parameter("n_outer must be at least 100".into()));
                }
                return Ok(energy_mc_bracketed(mk, q, eps, n_outer, seed)?.midpoint);
            }
            if n_outer < 100 {
                return Err(Error::Parameter("n_outer must be at least 100".into()));
            }
            // Above the separation the window bracket is unavailable; fall
            // back to an empirical inner sample per outer point.
            let inner = 256usize;
            let depth = inner_window(eps)?.max(DEFAULT_DECISION_DEPTH.min(4096));
            let vals: Vec<f64> = (0..n_outer)
                .into_par_iter()
                .map(|i| {
                    let x = mk.sample_orbit(depth, mix_seed(seed, 0xB0B0_0000 + i as u64));
                    let mut hits = 0usize;
                    for j in 0..inner {
                        let y = mk.sample_orbit(
                            depth,
                            mix_seed(seed, 0xC1C1_0000 + (i * inner + j) as u64),
                        );
                        if compare_threshold(&x, &y, eps, true, DEFAULT_DECISION_DEPTH)
                            .expect("same alphabet")
                            == ThresholdOutcome::Within
                        {
                            hits += 1;
                        }
                    }
                    (hits as f64 / inner as f64).powf(q - 1.0)
                })
                .collect();
            let (value, stderr) = mean_and_stderr(&vals);
            Ok(EstimateReport {
                value,
                stderr,
                n_samples: n_outer as u64,
                seed,
                eps,
                method: Method::MonteCarlo,
            })
        }
    }
}

/// The mollifier: 1 inside the closed `eps`-ball, linear `2 - d/eps` on the
/// `eps..2eps` shell, 0 outside the open `2eps`-ball.
#[inline]
pub fn mollifier_kernel(d: f64, eps: f64) -> f64 {
    if d <= eps {
        1.0
    } else if d >= 2.0 * eps {
        0.0
    } else {
        2.0 - d / eps
    }
}

/// Kernel value at the (possibly deep) sequence distance between two windows.
fn kernel_between(x: &SeqWindow, y: &SeqWindow, eps: f64) -> f64 {
    if x.same_sequence(y) {
        return 1.0;
    }
    if let Some((v, _err)) = distance_eventually_periodic(x, y) {
        return mollifier_kernel(v, eps);
    }
    // Classify against the kernel breakpoints first; only a genuine shell
    // event needs a refined value.
    match compare_threshold(x, y, eps, false, DEFAULT_DECISION_DEPTH).expect("same alphabet") {
        ThresholdOutcome::Within => return 1.0,
        ThresholdOutcome::Outside => {}
        ThresholdOutcome::Indeterminate => {}
    }
    if compare_threshold(x, y, 2.0 * eps, false, DEFAULT_DECISION_DEPTH).expect("same alphabet")
        == ThresholdOutcome::Outside
    {
        return 0.0;
    }
    let tol = (eps * 1e-6).max(tail_bound(KERNEL_REFINE_DEPTH));
    let v = distance(x, y, tol).expect("validated inputs");
    mollifier_kernel(v, eps)
}

/// Mollified mass `f_eps(mu, x)`: the kernel centered at `x` integrated
/// against the measure.
///
/// Exact finite sum over atoms for periodic measures; a seeded Monte-Carlo
/// report for Markov measures.
pub fn mollified_ball_mass(
    m: &ShiftMeasure,
    x: &SeqWindow,
    eps: f64,
    inner_samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    match m {
        ShiftMeasure::Periodic(p) => {
            let atoms = p.atoms();
            let k = atoms.len() as f64;
            let value = atoms
                .iter()
                .map(|z| kernel_between(x, z, eps))
                .sum::<f64>()
                / k;
            Ok(EstimateReport::exact(
                value,
                eps,
                atoms.len() as u64,
                Method::ExactCylinder,
            ))
        }
        ShiftMeasure::Markov(mk) => {
            let n = inner_samples.max(16);
            let depth = inner_window(eps)?.max(64);
            let vals: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|j| {
                    let y = mk.sample_orbit(depth, mix_seed(seed, 0xD2D2_0000 + j as u64));
                    kernel_between(x, &y, eps)
                })
                .collect();
            let (value, stderr) = mean_and_stderr(&vals);
            Ok(EstimateReport {
                value,
                stderr,
                n_samples: n as u64,
                seed,
                eps,
                method: Method::MonteCarlo,
            })
        }
    }
}

/// Exact mollified energy of a periodic measure:
/// `J(q, eps) = sum_i (1/k) f_eps(mu, atom_i)^{q-1}`.
pub fn periodic_mollified_energy_exact(
    p: &PeriodicOrbitMeasure,
    q: f64,
    eps: f64,
) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let atoms = p.atoms();
    let k = atoms.len() as f64;
    let mut total = 0.0;
    for zi in &atoms {
        let f = atoms
            .iter()
            .map(|zj| kernel_between(zi, zj, eps))
            .sum::<f64>()
            / k;
        total += f.powf(q - 1.0);
    }
    Ok(total / k)
}

/// Mollified energy `J(q, eps)`: exact for periodic measures, nested
/// Monte-Carlo for Markov measures (the reported stderr covers the outer
/// average; the inner kernel means carry an O(1/inner_samples) bias).
pub fn mollified_energy(
    m: &ShiftMeasure,
    q: f64,
    eps: f64,
    n_outer: usize,
    inner_samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if !(q > 1.0) {
        return Err(Error::OrderOutOfRange("q > 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    match m {
        ShiftMeasure::Periodic(p) => {
            let value = periodic_mollified_energy_exact(p, q, eps)?;
            Ok(EstimateReport::exact(
                value,
                eps,
                p.period() as u64,
                Method::ExactCylinder,
            ))
        }
        ShiftMeasure::Markov(mk) => {
            if n_outer < 100 {
                return Err(Error::Parameter("n_outer must be at least 100".into()));
            }
            let inner = inner_samples.max(16);
            let depth = inner_window(eps)?.max(64);
            let vals: Vec<f64> = (0..n_outer)
                .into_par_iter()
                .map(|i| {
                    let x = mk.sample_orbit(depth, mix_seed(seed, 0xE3E3_0000 + i as u64));
                    let mut acc = 0.0;
                    for j in 0..inner {
                        let y = mk.sample_orbit(
                            depth,
                            mix_seed(seed, 0xF4F4_0000 + (i * inner + j) as u64),
                        );
                        acc += kernel_between(&x, &y, eps);
                    }
                    (acc / inner as f64).powf(q - 1.0)
                })
                .collect();
            let (value, stderr) = mean_and_stderr(&vals);
            Ok(EstimateReport {
                value,
                stderr,
                n_samples: n_outer as u64,
                seed,
                eps,
                method: Method::MonteCarlo,
            })
        }
    }
}

/// Convenience wrapper: windowed energy with the default cylinder budget.
pub fn windowed_energy_exact_default(m: &ShiftMeasure, q: f64, n: usize) -> Result<f64> {
    windowed_energy_exact(m, q, n, DEFAULT_CYLINDER_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    #[test]
    fn closed_form_trivial_cases() {
        // n = 0 is the empty transition product.
        assert!((markov_energy_closed_form(3, 0.1, 2.0, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // Uniform two-state chain at q = 2, n = 1.
        assert!((markov_energy_closed_form(2, 0.5, 2.0, 1).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn closed_form_rejects_bad_orders() {
        assert!(markov_energy_closed_form(2, 0.5, 1.0, 1).is_err());
        assert!(markov_energy_closed_form(2, 1.5, 2.0, 1).is_err());
        assert!(markov_energy_closed_form(1, 0.5, 2.0, 1).is_err());
    }

    #[test]
    fn kernel_shape() {
        assert_eq!(mollifier_kernel(0.0, 0.2), 1.0);
        assert_eq!(mollifier_kernel(0.2, 0.2), 1.0);
        assert!((mollifier_kernel(0.3, 0.2) - 0.5).abs() < 1e-15);
        assert_eq!(mollifier_kernel(0.4, 0.2), 0.0);
        // Value at one and a half radii is exactly one half.
        assert!((mollifier_kernel(1.5 * 0.07, 0.07) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn periodic_energy_is_k_power() {
        let a = Alphabet::unit(&["a", "b", "c", "d"]).unwrap();
        let p = PeriodicOrbitMeasure::new(a, vec![0, 1, 2, 3]).unwrap();
        for &eps in &[0.9, 0.3, 0.01] {
            let v = periodic_ball_energy_exact(&p, 2.0, eps).unwrap();
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_energy_is_one() {
        let a = Alphabet::unit(&["a", "b"]).unwrap();
        let p = PeriodicOrbitMeasure::new(a, vec![0]).unwrap();
        for &eps in &[0.9, 0.1] {
            assert!((periodic_ball_energy_exact(&p, 2.0, eps).unwrap() - 1.0).abs() < 1e-15);
            assert!(
                (periodic_mollified_energy_exact(&p, 2.0, eps).unwrap() - 1.0).abs() < 1e-15
            );
        }
    }
}
