//! Energy oracles: an independent enumeration of cylinder masses checks both
//! the library enumeration and the closed form; Monte-Carlo estimates are
//! checked against their own brackets; the mollified sandwich is verified in
//! exact arithmetic on periodic measures.

use shiftdim_core::energy::{
    energy_mc, energy_mc_bracketed, markov_energy_closed_form, mollified_ball_mass,
    mollified_energy, periodic_ball_energy_exact, periodic_mollified_energy_exact,
    windowed_energy_exact,
};
use shiftdim_core::measure::{MarkovMeasure, PeriodicOrbitMeasure, ShiftMeasure};
use shiftdim_core::{Alphabet, Error, SeqWindow};

fn unit_alphabet(n: usize) -> std::sync::Arc<Alphabet> {
    let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
    Alphabet::unit(&refs).unwrap()
}

fn markov(s: usize, kappa: f64) -> MarkovMeasure {
    MarkovMeasure::build(unit_alphabet(s), (0..s as u16).collect(), kappa).unwrap()
}

/// Test-local oracle: sum of q-th powers of depth-n cylinder masses by an
/// explicit word-tree walk, independent of the library odometer.
fn energy_enumeration_oracle(m: &MarkovMeasure, q: f64, n: usize) -> f64 {
    let s = m.state_count();
    let len = 2 * n + 1;
    let mut total = 0.0;
    let mut stack: Vec<(usize, usize, f64)> = (0..s)
        .map(|st| (st, 1usize, 1.0 / s as f64))
        .collect();
    while let Some((state, depth, mass)) = stack.pop() {
        if depth == len {
            total += mass.powf(q);
            continue;
        }
        for next in 0..s {
            stack.push((next, depth + 1, mass * m.transition(state, next)));
        }
    }
    total
}

#[test]
fn closed_form_agrees_with_both_enumerations() {
    for &s in &[2usize, 3, 4] {
        for &kappa in &[0.1, 0.3, 0.5] {
            for &q in &[1.5, 2.0, 3.0] {
                for n in 1..=2usize {
                    let mk = markov(s, kappa);
                    let closed =
                        markov_energy_closed_form(s, kappa, q, n).unwrap();
                    let lib = windowed_energy_exact(
                        &ShiftMeasure::Markov(mk.clone()),
                        q,
                        n,
                        1_000_000,
                    )
                    .unwrap();
                    let oracle = energy_enumeration_oracle(&mk, q, n);
                    assert!(
                        ((closed - lib) / closed).abs() < 1e-10,
                        "library enumeration s={s} kappa={kappa} q={q} n={n}"
                    );
                    assert!(
                        ((closed - oracle) / closed).abs() < 1e-10,
                        "oracle enumeration s={s} kappa={kappa} q={q} n={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn frozen_energy_values() {
    // Uniform two-state chain: eight depth-1 cylinders of mass 1/8.
    let m2 = ShiftMeasure::Markov(markov(2, 0.5));
    assert!((windowed_energy_exact(&m2, 2.0, 1, 1_000_000).unwrap() - 0.125).abs() < 1e-15);

    // Three states, kappa 0.1: (1/3) * (0.5*0.01 + 0.81)^2 = 0.221408333...
    let m3 = ShiftMeasure::Markov(markov(3, 0.1));
    let v1 = windowed_energy_exact(&m3, 2.0, 1, 1_000_000).unwrap();
    assert!((v1 - 0.2214083333333333).abs() < 1e-12);

    // Same chain at depth 2: (1/3) * 0.815^4 = 0.14706495...
    let v2 = windowed_energy_exact(&m3, 2.0, 2, 1_000_000).unwrap();
    assert!((v2 - 0.815f64.powi(4) / 3.0).abs() < 1e-12);
    assert!((v2 - 0.1470649502).abs() < 1e-9);

    // Periodic orbit of length four: k^{1-q} at any depth.
    let p = PeriodicOrbitMeasure::new(unit_alphabet(4), vec![0, 1, 2, 3]).unwrap();
    for n in 0..3 {
        let v = windowed_energy_exact(&ShiftMeasure::Periodic(p.clone()), 2.0, n, 1_000_000)
            .unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }
}

#[test]
fn energy_guards() {
    let m = ShiftMeasure::Markov(markov(3, 0.1));
    assert!(matches!(
        windowed_energy_exact(&m, 0.9, 1, 1_000_000),
        Err(Error::OrderOutOfRange(_))
    ));
    assert!(matches!(
        windowed_energy_exact(&m, 2.0, 7, 1_000),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn periodic_energy_is_exact_with_zero_stderr() {
    let p = PeriodicOrbitMeasure::new(unit_alphabet(3), vec![0, 1, 2]).unwrap();
    let r = energy_mc(&ShiftMeasure::Periodic(p), 2.0, 0.05, 100, 1).unwrap();
    assert_eq!(r.stderr, 0.0);
    assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn monte_carlo_energy_stays_inside_its_bracket() {
    let mk = markov(2, 0.5);
    let bracket = energy_mc_bracketed(&mk, 2.0, 0.3, 2000, 42).unwrap();
    let lower_exact = markov_energy_closed_form(2, 0.5, 2.0, bracket.inner_window).unwrap();
    let upper_exact = markov_energy_closed_form(2, 0.5, 2.0, bracket.cutoff_window).unwrap();
    // Each side estimates its own windowed energy.
    assert!((bracket.lower.value - lower_exact).abs() <= 4.0 * bracket.lower.stderr);
    assert!((bracket.upper.value - upper_exact).abs() <= 4.0 * bracket.upper.stderr);
    // And the midpoint sits inside the widened bracket.
    let mid = bracket.midpoint.value;
    assert!(mid >= lower_exact - 4.0 * bracket.midpoint.stderr);
    assert!(mid <= upper_exact + 4.0 * bracket.midpoint.stderr);
}

#[test]
fn stderr_shrinks_like_inverse_sqrt_of_samples() {
    let mk = markov(3, 0.2);
    let a = energy_mc_bracketed(&mk, 2.0, 0.3, 1000, 5).unwrap();
    let b = energy_mc_bracketed(&mk, 2.0, 0.3, 2000, 5).unwrap();
    let ratio = b.midpoint.stderr / a.midpoint.stderr;
    let target = 0.5f64.sqrt();
    assert!(
        (ratio / target - 1.0).abs() < 0.2,
        "stderr ratio {ratio} vs {target}"
    );
}

#[test]
fn mollified_mass_on_periodic_atoms() {
    let p = PeriodicOrbitMeasure::new(unit_alphabet(3), vec![0, 1, 2]).unwrap();
    let m = ShiftMeasure::Periodic(p.clone());
    // Atom distances are above 2 eps, so only the atom itself contributes.
    let x = p.atom(0);
    let r = mollified_ball_mass(&m, &x, 0.2, 0, 0).unwrap();
    assert!((r.value - 1.0 / 3.0).abs() < 1e-12);

    // A far constant point sees no atom within two radii.
    let far = SeqWindow::constant(unit_alphabet(3), 0).unwrap();
    let r_far = mollified_ball_mass(&m, &far, 0.2, 0, 0).unwrap();
    // The constant-zero sequence is within kernel range of no atom except
    // through its agreement pattern; with distinct orbit symbols every atom
    // differs from it on two of three residues, far beyond 2 eps = 0.4.
    assert!(r_far.value < 1.0 / 3.0 + 1e-12);
}

#[test]
fn mollified_sandwich_is_exact_on_periodic_measures() {
    // Unit-separated alphabet: the shell between eps and 2 eps is empty at
    // every grid scale, so the mollified and plain energies coincide.
    let p = PeriodicOrbitMeasure::new(unit_alphabet(3), vec![0, 1, 2]).unwrap();
    for i in 1..=20 {
        let eps = 0.98f64 * (0.7f64).powi(i - 1);
        let j1 = periodic_mollified_energy_exact(&p, 2.0, eps).unwrap();
        let i1 = periodic_ball_energy_exact(&p, 2.0, eps).unwrap();
        let j2 = periodic_mollified_energy_exact(&p, 2.0, 2.0 * eps).unwrap();
        assert!(j1 <= i1 + 1e-12, "left link at eps={eps}");
        assert!(i1 <= j2 + 1e-12, "right link at eps={eps}");
    }
}

#[test]
fn mollified_sandwich_with_nonempty_shell() {
    // Separation 0.3: atom distances are ~2.05, so radii above ~0.51 put
    // other atoms inside the doubled-radius shell and the right link becomes
    // strict.
    let a = Alphabet::uniform(&["a", "b", "c"], 0.3).unwrap();
    let p = PeriodicOrbitMeasure::new(a, vec![0, 1, 2]).unwrap();
    for &eps in &[0.6, 0.75, 0.9] {
        let j1 = periodic_mollified_energy_exact(&p, 2.0, eps).unwrap();
        let i1 = periodic_ball_energy_exact(&p, 2.0, eps).unwrap();
        let j2 = periodic_mollified_energy_exact(&p, 2.0, 2.0 * eps).unwrap();
        assert!(j1 <= i1 + 1e-12);
        assert!(i1 <= j2 + 1e-12);
        assert!(j2 > i1 + 1e-6, "shell should be active at eps={eps}");
    }
}

#[test]
fn fixed_point_mollified_energy_is_one() {
    let p = PeriodicOrbitMeasure::new(unit_alphabet(2), vec![0]).unwrap();
    let m = ShiftMeasure::Periodic(p);
    for &eps in &[0.5, 0.05] {
        let r = mollified_energy(&m, 2.0, eps, 100, 16, 3).unwrap();
        assert_eq!(r.value, 1.0);
    }
}
