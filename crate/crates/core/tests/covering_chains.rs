//! Covering-sum examples and the exhaustive-net chain checks on tiny
//! periodic instances: exact energies, net infima for plain and mollified
//! costs, and the greedy upper bound, all computed by independent routes.

use shiftdim_core::covering::{
    covering_sum_greedy, exhaustive_net_infimum, mollified_covering_sum, CoverCost,
};
use shiftdim_core::energy::periodic_ball_energy_exact;
use shiftdim_core::measure::{MarkovMeasure, PeriodicOrbitMeasure, ShiftMeasure};
use shiftdim_core::{Alphabet, Error, SeqWindow};

fn unit_alphabet(n: usize) -> std::sync::Arc<Alphabet> {
    let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
    Alphabet::unit(&refs).unwrap()
}

fn periodic(k: usize) -> PeriodicOrbitMeasure {
    PeriodicOrbitMeasure::new(unit_alphabet(k.max(2)), (0..k as u16).collect()).unwrap()
}

/// A wide window denoting the `i`-th atom, so far coordinates can be
/// mutated while the tails stay periodic.
fn wide_atom(p: &PeriodicOrbitMeasure, i: usize, half: usize) -> SeqWindow {
    let k = p.period() as i64;
    let symbols: Vec<u16> = (-(half as i64)..=half as i64)
        .map(|c| p.word()[(c - i as i64).rem_euclid(k) as usize])
        .collect();
    SeqWindow::from_parts(
        p.alphabet().clone(),
        symbols,
        shiftdim_core::Extension::Periodic {
            period: p.period(),
        },
    )
    .unwrap()
}

/// Atoms plus single-coordinate mutations: positive-mass off-atom centers
/// (a mutation at coordinate c sits at distance 1/(c^2+1) from its atom)
/// and zero-mass decoys, all with periodic tails.
fn candidate_net(p: &PeriodicOrbitMeasure, max_centers: usize) -> Vec<SeqWindow> {
    let mut net = p.atoms();
    let alphabet_len = p.alphabet().len() as u16;
    'outer: for coord in [5i64, 6, 7, -5, -6, 0, 1] {
        for i in 0..p.period() {
            let atom = wide_atom(p, i, 9);
            for sym in 0..alphabet_len {
                if sym != atom.coordinate(coord) {
                    net.push(atom.with_symbol_at(coord, sym).unwrap());
                    if net.len() >= max_centers {
                        break 'outer;
                    }
                }
            }
        }
    }
    net
}

#[test]
fn covering_examples() {
    let m = ShiftMeasure::Periodic(periodic(3));
    // Atom-centered covering is exactly k^{1-s} below the separation.
    let r = covering_sum_greedy(&m, 0.5, 0.03, 1_000_000).unwrap();
    assert!((r.value - 1.7320508075688772).abs() < 1e-12);
    assert!(r.value <= 3f64.sqrt() + 1e-12);
    // s close to 1: 3^{0.01}.
    let r = covering_sum_greedy(&m, 0.99, 0.03, 1_000_000).unwrap();
    assert!((r.value - 1.0110466919378536).abs() < 1e-12);
    // One ball above the diameter covers everything.
    let r = covering_sum_greedy(&m, 0.5, 3.5, 1_000_000).unwrap();
    assert_eq!(r.value, 1.0);
}

#[test]
fn mollified_covering_on_atoms() {
    let m = ShiftMeasure::Periodic(periodic(3));
    let r = mollified_covering_sum(&m, 0.5, 0.03, 1_000_000).unwrap();
    assert!((r.value - 3f64.powf(0.5)).abs() < 1e-12);
    let single = ShiftMeasure::Periodic(periodic(1));
    let r1 = mollified_covering_sum(&single, 0.7, 0.03, 1_000_000).unwrap();
    assert_eq!(r1.value, 1.0);
}

#[test]
fn exhaustive_net_chain_on_tiny_instances() {
    // The chain I(s, eps) <= S*(s, eps/2) <= W*(s, eps/2) <= S*(s, eps),
    // with S*, W* exact net infima, on instances small enough to enumerate.
    for k in [2usize, 3, 5] {
        let p = periodic(k);
        let m = ShiftMeasure::Periodic(p.clone());
        let net = candidate_net(&p, 200);
        assert!(net.len() <= 200);
        for &s in &[0.3, 0.5, 0.9] {
            for &eps in &[0.37, 0.13, 0.05] {
                let energy = periodic_ball_energy_exact(&p, s, eps).unwrap();
                let s_half =
                    exhaustive_net_infimum(&m, s, eps / 2.0, &net, CoverCost::BallMass).unwrap();
                let w_half =
                    exhaustive_net_infimum(&m, s, eps / 2.0, &net, CoverCost::Mollified).unwrap();
                let s_full =
                    exhaustive_net_infimum(&m, s, eps, &net, CoverCost::BallMass).unwrap();
                assert!(energy <= s_half + 1e-12, "k={k} s={s} eps={eps}");
                assert!(s_half <= w_half + 1e-12, "k={k} s={s} eps={eps}");
                assert!(w_half <= s_full + 1e-12, "k={k} s={s} eps={eps}");

                // The greedy construction can never beat the exact infimum.
                let greedy = covering_sum_greedy(&m, s, eps, 1_000_000).unwrap();
                assert!(greedy.value >= s_full - 1e-12);

                // And the mollified net infimum stays inside the outer pair.
                assert!(energy <= w_half + 1e-12 && w_half <= s_full + 1e-12);
            }
        }
    }
}

#[test]
fn markov_cylinder_covering_is_an_upper_bound() {
    // At a coarse radius the cylinder covering is enumerable and must
    // dominate the trivial lower bound S >= (sum over balls of full mass)
    // ... >= 1 achieved by the single-ball covering at huge radii.
    let a = unit_alphabet(3);
    let mk = MarkovMeasure::build(a, vec![0, 1, 2], 0.3).unwrap();
    let m = ShiftMeasure::Markov(mk);
    let r = covering_sum_greedy(&m, 0.5, 0.9, 10_000_000).unwrap();
    assert!(r.value >= 1.0);
    // Tight budgets reject the enumeration rather than truncating it.
    assert!(matches!(
        covering_sum_greedy(&m, 0.5, 0.3, 1_000_000),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn covering_rejects_bad_exponents() {
    let m = ShiftMeasure::Periodic(periodic(3));
    for s in [0.0, 1.0, -0.2, 1.4] {
        assert!(covering_sum_greedy(&m, s, 0.05, 1_000_000).is_err());
    }
}
