//! Order profiles and dimension quotient series: monotonicity of the order
//! profile, the closed-form divergence direction, and the periodic vanishing
//! direction, all in exact arithmetic.

use proptest::prelude::*;

use shiftdim_core::gfd::{divergence_series, gfd_proxy, renyi_entropy, renyi_profile};
use shiftdim_core::measure::{MarkovMeasure, PeriodicOrbitMeasure, ShiftMeasure};
use shiftdim_core::{Alphabet, ScaleGrid};

fn unit_alphabet(n: usize) -> std::sync::Arc<Alphabet> {
    let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
    Alphabet::unit(&refs).unwrap()
}

fn markov(s: usize, kappa: f64) -> MarkovMeasure {
    MarkovMeasure::build(unit_alphabet(s), (0..s as u16).collect(), kappa).unwrap()
}

#[test]
fn uniform_cylinder_distribution_has_constant_profile() {
    // Two states at kappa 1/2 give eight depth-1 cylinders of mass 1/8.
    let m = ShiftMeasure::Markov(markov(2, 0.5));
    let profile = renyi_profile(&m, 1, &[1.5, 2.0, 3.0], 1_000_000).unwrap();
    for (_, v) in profile {
        assert!((v - 8f64.ln()).abs() < 1e-12);
    }
}

#[test]
fn profile_is_nonincreasing_across_the_family() {
    for &s in &[2usize, 3, 4] {
        for &kappa in &[0.1, 0.3, 0.5] {
            for n in 1..=2usize {
                let m = ShiftMeasure::Markov(markov(s, kappa));
                let profile =
                    renyi_profile(&m, n, &[1.5, 2.0, 3.0, 5.0], 1_000_000).unwrap();
                for w in profile.windows(2) {
                    assert!(
                        w[0].1 >= w[1].1 - 1e-12,
                        "profile increased: s={s} kappa={kappa} n={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn two_mass_profile_decreases() {
    let masses = [0.9, 0.1];
    let h2 = renyi_entropy(&masses, 2.0);
    let h3 = renyi_entropy(&masses, 3.0);
    assert!((h2 - (-(0.82f64.ln()))).abs() < 1e-12);
    assert!((h3 - (-(0.730f64.ln()) / 2.0)).abs() < 1e-12);
    assert!(h2 > h3);
}

#[test]
fn divergence_quotients_grow_monotonically() {
    // The normalized quotient series along the inverse-square grid k=2..12
    // climbs strictly and the k=12 entry is at least twice the k=4 entry.
    let mk = markov(3, 0.05);
    let grid = ScaleGrid::inverse_square(11).unwrap();
    let series = divergence_series(&mk, 2.0, &grid).unwrap();
    let q: Vec<f64> = series.quotients().collect();
    assert_eq!(q.len(), 11);
    for w in q.windows(2) {
        assert!(w[1] > w[0], "not increasing: {w:?}");
    }
    let at_k4 = q[2];
    let at_k12 = q[10];
    assert!(at_k12 / at_k4 >= 2.0, "growth factor {}", at_k12 / at_k4);
}

#[test]
fn divergence_growth_for_other_orders() {
    let mk = markov(3, 0.05);
    let grid = ScaleGrid::inverse_square(11).unwrap();
    let q15: Vec<f64> = divergence_series(&mk, 1.5, &grid).unwrap().quotients().collect();
    let q3: Vec<f64> = divergence_series(&mk, 3.0, &grid).unwrap().quotients().collect();
    for series in [&q15, &q3] {
        for w in series.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(series[10] / series[2] >= 2.0);
    }
}

#[test]
fn full_markov_quotient_matches_hand_formula() {
    let mk = markov(3, 0.05);
    let m = ShiftMeasure::Markov(mk.clone());
    let grid = ScaleGrid::inverse_square(11).unwrap();
    let series = gfd_proxy(&m, 2.0, &grid, 100, 0).unwrap();
    for (pos, p) in series.points.iter().enumerate() {
        let k = grid.inverse_square_index(pos).unwrap();
        let n = (k - 1) as f64;
        let log_i = (1.0f64 / 3.0).ln() + 2.0 * n * mk.row_power_sum(2.0).ln();
        let expect = log_i / p.eps.ln();
        assert!((p.quotient.unwrap() - expect).abs() < 1e-12);
    }
}

#[test]
fn periodic_quotients_vanish_slowly() {
    // Exact value: -log k / log eps; at eps = 1e-6 and k = 5 that is about
    // 0.1165, and it decreases toward zero as eps shrinks.
    let p = PeriodicOrbitMeasure::new(unit_alphabet(5), vec![0, 1, 2, 3, 4]).unwrap();
    let m = ShiftMeasure::Periodic(p);
    let grid = ScaleGrid::dyadic(20).unwrap();
    let series = gfd_proxy(&m, 2.0, &grid, 100, 0).unwrap();
    let q: Vec<f64> = series.quotients().collect();
    for (i, p) in series.points.iter().enumerate() {
        let expect = -(5f64.ln()) / p.eps.ln();
        assert!((q[i] - expect).abs() < 1e-12);
    }
    for w in q.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn entropy_order_quotient_of_markov_uses_log_masses() {
    let mk = markov(3, 0.2);
    let m = ShiftMeasure::Markov(mk.clone());
    let grid = ScaleGrid::inverse_square(5).unwrap();
    let series = gfd_proxy(&m, 1.0, &grid, 100, 0).unwrap();
    for (pos, p) in series.points.iter().enumerate() {
        let k = grid.inverse_square_index(pos).unwrap();
        let n = (k - 1) as f64;
        let expect = (-(3f64.ln()) + 2.0 * n * mk.row_log_mean()) / p.eps.ln();
        assert!((p.quotient.unwrap() - expect).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_entropy_is_nonincreasing_on_random_distributions(
        raw in proptest::collection::vec(0.01f64..1.0, 2..12),
        q1 in 1.01f64..6.0,
        dq in 0.01f64..3.0,
    ) {
        let total: f64 = raw.iter().sum();
        let masses: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let h1 = renyi_entropy(&masses, q1);
        let h2 = renyi_entropy(&masses, q1 + dq);
        prop_assert!(h1 >= h2 - 1e-10);
    }
}
