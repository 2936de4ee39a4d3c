//! Sampled-orbit statistics: chain sampling behavior, the orbit-versus-
//! ensemble convergence of correlation sums to energies at matching window
//! brackets, and return times along sampled paths.

use shiftdim_core::corrsum::{correlation_sum_bracket, correlation_sum_detailed};
use shiftdim_core::energy::energy_mc_bracketed;
use shiftdim_core::measure::{MarkovMeasure, ShiftMeasure};
use shiftdim_core::recurrence::recurrence_rates;
use shiftdim_core::{Alphabet, ScaleGrid};

fn markov(s: usize, kappa: f64) -> MarkovMeasure {
    let labels: Vec<String> = (0..s).map(|i| format!("s{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
    let a = Alphabet::unit(&refs).unwrap();
    MarkovMeasure::build(a, (0..s as u16).collect(), kappa).unwrap()
}

#[test]
fn near_zero_kappa_paths_are_almost_cyclic() {
    // 10^4 transitions at kappa = 1e-9: the chance of any non-cyclic step is
    // about 1e-5, so the seeded sample has none.
    let m = markov(3, 1e-9);
    let x = m.sample_orbit(5000, 2024);
    let symbols = x.realize(-5000, 5000);
    let states = m.states();
    let idx = |sym| states.iter().position(|&s| s == sym).unwrap();
    let non_cyclic = symbols
        .windows(2)
        .filter(|w| idx(w[1]) != (idx(w[0]) + 1) % 3)
        .count();
    assert_eq!(non_cyclic, 0);
}

#[test]
fn stationary_symbol_frequencies_are_uniform() {
    let m = markov(3, 0.2);
    let x = m.sample_orbit(50_000, 99);
    let symbols = x.realize(-50_000, 50_000);
    let mut counts = [0usize; 3];
    for &s in &symbols {
        counts[s as usize] += 1;
    }
    for c in counts {
        let freq = c as f64 / symbols.len() as f64;
        assert!((freq - 1.0 / 3.0).abs() < 0.01, "freq {freq}");
    }
}

/// Orbit correlation brackets against ensemble energy brackets at one scale.
fn midpoint_deviation(
    m: &MarkovMeasure,
    q: u32,
    n: usize,
    eps: f64,
    n_outer: usize,
    seed: u64,
) -> (f64, f64) {
    let x = m.sample_orbit(n + 80, seed);
    let (c_lo, c_hi) = correlation_sum_bracket(&x, q, n, eps).unwrap();
    let c_mid = (c_lo + c_hi) / 2.0;
    let bracket = energy_mc_bracketed(m, q as f64, eps, n_outer, seed ^ 0x5EED).unwrap();
    let dev = (c_mid - bracket.midpoint.value).abs();
    let band = 3.0 * bracket.midpoint.stderr + 0.05 * bracket.midpoint.value;
    (dev, band)
}

#[test]
fn orbit_and_ensemble_midpoints_converge() {
    let m = markov(3, 0.2);
    let eps = 0.3;
    let (dev, band) = midpoint_deviation(&m, 2, 10_000, eps, 10_000, 7);
    assert!(dev <= band, "deviation {dev} above band {band}");

    // Deviations shrink with the segment length, up to noise.
    let (d100, b100) = midpoint_deviation(&m, 2, 100, eps, 10_000, 7);
    let (d10k, _) = midpoint_deviation(&m, 2, 10_000, eps, 10_000, 7);
    assert!(d10k <= d100 + 2.0 * b100, "no convergence trend: {d100} -> {d10k}");
}

#[test]
fn true_metric_correlation_matches_its_own_bracket() {
    // The per-pair decided correlation sum must land inside the windowed
    // bracket that contains it by construction. A pair whose distance falls
    // within the tail resolution of the threshold stays ambiguous; such
    // pairs are rare and their optimistic resolution cannot leave the
    // bracket (any pair with partial sum below eps agrees on the cutoff
    // window).
    let m = markov(3, 0.2);
    let n = 1500;
    let x = m.sample_orbit(n + 80, 13);
    let eps = 0.3;
    let (c_lo, c_hi) = correlation_sum_bracket(&x, 2, n, eps).unwrap();
    let (c_true, ambiguous) = correlation_sum_detailed(&x, 2, n, eps, 4096).unwrap();
    let pair_count = ((n + 1) * n / 2) as f64;
    assert!(
        (ambiguous as f64) / pair_count < 1e-3,
        "too many ambiguous pairs: {ambiguous}"
    );
    assert!(c_lo <= c_true + 1e-12 && c_true <= c_hi + 1e-12);
}

#[test]
fn sampled_path_returns_on_coarse_scales() {
    // Return times climb steeply as the radius shrinks (the expected time
    // is the reciprocal mass of the target neighborhood), so only coarse
    // scales finish inside the horizon; finer scales come back not-found
    // and are excluded from the proxies.
    let m = markov(3, 0.2);
    let x = m.sample_orbit(64, 99);
    let grid = ScaleGrid::inverse_square_from(2, 4).unwrap(); // 0.2, 0.1, 1/17, 1/26
    let rates = recurrence_rates(&x, &grid, 100_000, 4096).unwrap();
    assert!(rates.lower >= 0.0);
    assert!(rates.upper.is_finite());
    // Coarse scales land; their hit times grow as the radius shrinks.
    let found: Vec<(f64, u64)> = rates
        .points
        .iter()
        .filter_map(|p| p.record.tau.map(|t| (p.record.radius, t)))
        .collect();
    assert!(found.len() >= 2, "expected the coarse scales to return");
    for w in found.windows(2) {
        assert!(w[0].1 <= w[1].1);
    }
    // Excluded scales carry no quotient.
    for p in &rates.points {
        assert_eq!(p.quotient.is_some(), p.record.tau.is_some() && !p.record.indeterminate);
    }
}

#[test]
fn markov_measure_for_shift_wrapper() {
    let m = markov(2, 0.5);
    let sm = ShiftMeasure::Markov(m);
    assert_eq!(sm.min_separation().unwrap(), 1.0);
    assert_eq!(sm.support_symbols().len(), 2);
}
