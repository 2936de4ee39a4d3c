//! Covering sums and their mollified variants.
//!
//! The covering sum at exponent `s in (0,1)` and radius `eps` is the infimum
//! over finite ball coverings of the summed `s`-th powers of ball masses.
//! The infimum itself is not computable, so two surrogates are provided:
//!
//! * constructed coverings that yield certified upper bounds (balls centered
//!   on the support, plus a conceptual far net of zero-mass balls that
//!   contributes nothing, with `0^s := 0`);
//! * an exhaustive minimum over a finite candidate-center net, exact by
//!   weighted set-cover dynamic programming, used as an oracle on small
//!   periodic instances.

use crate::alphabet::same_alphabet;
use crate::energy::mollifier_kernel;
use crate::error::{Error, Result};
use crate::measure::{checked_power, ShiftMeasure};
use crate::metric::{distance_eventually_periodic, inner_window, total_weight, window_cutoff};
use crate::report::{EstimateReport, Method};
use crate::window::SeqWindow;

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::OrderOutOfRange("covering exponent in (0, 1)"));
    }
    Ok(())
}

/// `x^s` with the covering convention `0^s = 0`.
#[inline]
fn power_or_zero(x: f64, s: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(s)
    }
}

/// Upper bound on the metric diameter of the measure's support.
fn support_diameter_upper(m: &ShiftMeasure) -> f64 {
    let alphabet = m.alphabet();
    if alphabet.max_dist() >= 1.0 {
        total_weight()
    } else {
        // Every coordinate contributes at most min(w_n, max_dist); bounding
        // each term by max_dist out to the weight crossover and by w_n beyond
        // would be tighter, but the full weight sum is always valid.
        total_weight()
    }
}

/// Constructed-covering upper bound on the covering sum.
///
/// Periodic support: one ball per atom (mass = matching atoms / k), plus the
/// zero-mass far net. Markov support: one ball per inner-window cylinder so
/// each cylinder sits inside its ball; ball masses are bounded above by the
/// cutoff-window cylinder mass of the center. A radius at least the support
/// diameter is covered by a single full-mass ball.
pub fn covering_sum_greedy(
    m: &ShiftMeasure,
    s: f64,
    eps: f64,
    budget: u64,
) -> Result<EstimateReport> {
    check_exponent(s)?;
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    if eps >= support_diameter_upper(m) {
        return Ok(EstimateReport::exact(1.0, eps, 1, Method::GreedyCover));
    }
    match m {
        ShiftMeasure::Periodic(p) => {
            let atoms = p.atoms();
            let k = atoms.len() as f64;
            let mut total = 0.0;
            for zi in &atoms {
                let mut count = 0usize;
                for zj in &atoms {
                    if zi.same_sequence(zj) {
                        count += 1;
                        continue;
                    }
                    let (v, err) = distance_eventually_periodic(zi, zj)
                        .expect("atoms have periodic tails");
                    if v + err < eps {
                        count += 1;
                    } else if v - err < eps {
                        return Err(Error::Parameter(format!(
                            "radius {eps} is within the distance resolution of an atom pair"
                        )));
                    }
                }
                total += power_or_zero(count as f64 / k, s);
            }
            Ok(EstimateReport::exact(
                total,
                eps,
                atoms.len() as u64,
                Method::GreedyCover,
            ))
        }
        ShiftMeasure::Markov(mk) => {
            // Centers at depth n_c so each center's cylinder lies in its
            // ball; each ball's mass is at most its cutoff-window cylinder
            // mass. The sum telescopes over the outer coordinates.
            if eps >= 1.0 {
                return Err(Error::ScaleOutOfRange(eps));
            }
            let n_c = inner_window(eps)?;
            let n0 = window_cutoff(eps)?;
            let needed = checked_power(mk.state_count(), 2 * n_c + 1);
            if needed > budget as u128 {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let measure = ShiftMeasure::Markov(mk.clone());
            let inner_masses = measure.enumerate_cylinder_masses(n0, budget)?;
            let outer_count = checked_power(mk.state_count(), (n_c - n0) * 2) as f64;
            let total: f64 = inner_masses
                .iter()
                .map(|&mass| power_or_zero(mass, s))
                .sum::<f64>()
                * outer_count;
            Ok(EstimateReport::exact(
                total,
                eps,
                needed as u64,
                Method::GreedyCover,
            ))
        }
    }
}

/// Constructed-covering upper bound on the mollified covering sum, using the
/// mollified masses `f_eps` in place of ball masses.
pub fn mollified_covering_sum(
    m: &ShiftMeasure,
    s: f64,
    eps: f64,
    budget: u64,
) -> Result<EstimateReport> {
    check_exponent(s)?;
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    if 2.0 * eps >= support_diameter_upper(m) {
        return Ok(EstimateReport::exact(1.0, eps, 1, Method::GreedyCover));
    }
    match m {
        ShiftMeasure::Periodic(p) => {
            let atoms = p.atoms();
            let k = atoms.len() as f64;
            let mut total = 0.0;
            for zi in &atoms {
                let mut f = 0.0;
                for zj in &atoms {
                    if zi.same_sequence(zj) {
                        f += 1.0;
                        continue;
                    }
                    let (v, _err) = distance_eventually_periodic(zi, zj)
                        .expect("atoms have periodic tails");
                    f += mollifier_kernel(v, eps);
                }
                total += power_or_zero(f / k, s);
            }
            Ok(EstimateReport::exact(
                total,
                eps,
                atoms.len() as u64,
                Method::GreedyCover,
            ))
        }
        ShiftMeasure::Markov(mk) => {
            // f_eps is at most the 2eps-ball mass, bounded by the
            // cutoff-window cylinder mass at radius 2eps.
            if 2.0 * eps >= 1.0 {
                return Err(Error::ScaleOutOfRange(eps));
            }
            let n_c = inner_window(eps)?;
            let n0 = window_cutoff(2.0 * eps)?;
            let needed = checked_power(mk.state_count(), 2 * n_c + 1);
            if needed > budget as u128 {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let measure = ShiftMeasure::Markov(mk.clone());
            let inner_masses = measure.enumerate_cylinder_masses(n0, budget)?;
            let outer_count = checked_power(mk.state_count(), (n_c - n0) * 2) as f64;
            let total: f64 = inner_masses
                .iter()
                .map(|&mass| power_or_zero(mass, s))
                .sum::<f64>()
                * outer_count;
            Ok(EstimateReport::exact(
                total,
                eps,
                needed as u64,
                Method::GreedyCover,
            ))
        }
    }
}

/// Which summand the exhaustive oracle minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverCost {
    /// Ball masses.
    BallMass,
    /// Mollified masses `f_eps`.
    Mollified,
}

/// Exact infimum over coverings drawn from a finite candidate net.
///
/// Only periodic measures are supported (the support must be finite for the
/// cover condition to be checkable). A subset of the net is a covering when
/// every atom lies strictly inside some chosen ball; everything off the
/// support is covered by far zero-cost balls. The minimum cost over covering
/// subsets is found by set-cover dynamic programming over atom masks, which
/// is exact.
pub fn exhaustive_net_infimum(
    m: &ShiftMeasure,
    s: f64,
    eps: f64,
    net: &[SeqWindow],
    cost: CoverCost,
) -> Result<f64> {
    check_exponent(s)?;
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let ShiftMeasure::Periodic(p) = m else {
        return Err(Error::Parameter(
            "the exhaustive covering oracle needs a finite support".into(),
        ));
    };
    let atoms = p.atoms();
    let k = atoms.len();
    if k > 20 {
        return Err(Error::Parameter(
            "exhaustive covering oracle supports at most 20 atoms".into(),
        ));
    }
    if net.iter().any(|c| !same_alphabet(c.alphabet(), m.alphabet())) {
        return Err(Error::AlphabetMismatch);
    }
    let full: u32 = (1u32 << k) - 1;
    let mut entries: Vec<(u32, f64)> = Vec::with_capacity(net.len());
    for c in net {
        let mut mask = 0u32;
        let mut hits = 0usize;
        let mut f = 0.0;
        for (j, z) in atoms.iter().enumerate() {
            let (v, err) = match distance_eventually_periodic(c, z) {
                Some(ve) => ve,
                None => {
                    return Err(Error::Parameter(
                        "net centers must have periodic tails".into(),
                    ))
                }
            };
            let v = if c.same_sequence(z) { 0.0 } else { v };
            if v + err < eps {
                mask |= 1 << j;
                hits += 1;
            } else if v - err < eps {
                return Err(Error::Parameter(format!(
                    "radius {eps} is within the distance resolution of a net pair"
                )));
            }
            f += mollifier_kernel(v, eps);
        }
        let ball_mass = hits as f64 / k as f64;
        let value = match cost {
            CoverCost::BallMass => power_or_zero(ball_mass, s),
            CoverCost::Mollified => power_or_zero(f / k as f64, s),
        };
        if mask != 0 {
            entries.push((mask, value));
        }
    }
    let union = entries.iter().fold(0u32, |acc, e| acc | e.0);
    if union != full {
        return Err(Error::Parameter(
            "candidate net cannot cover the support at this radius".into(),
        ));
    }
    let mut dp = vec![f64::INFINITY; (full as usize) + 1];
    dp[0] = 0.0;
    for mask in 0..=full as usize {
        if !dp[mask].is_finite() {
            continue;
        }
        for (cover, value) in &entries {
            let next = mask | *cover as usize;
            if next != mask {
                let cand = dp[mask] + value;
                if cand < dp[next] {
                    dp[next] = cand;
                }
            }
        }
    }
    Ok(dp[full as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::measure::PeriodicOrbitMeasure;

    fn periodic(k: usize) -> ShiftMeasure {
        let labels: Vec<String> = (0..k.max(2)).map(|i| format!("s{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|x| x.as_str()).collect();
        let a = Alphabet::unit(&refs).unwrap();
        ShiftMeasure::Periodic(
            PeriodicOrbitMeasure::new(a, (0..k as u16).collect()).unwrap(),
        )
    }

    #[test]
    fn atom_centered_covering_hits_the_closed_value() {
        let m = periodic(3);
        let r = covering_sum_greedy(&m, 0.5, 0.01, 1_000_000).unwrap();
        assert!((r.value - 3f64.powf(0.5)).abs() < 1e-12);
        assert!(r.value <= 3f64.powf(0.5) + 1e-12);
        let r99 = covering_sum_greedy(&m, 0.99, 0.01, 1_000_000).unwrap();
        assert!((r99.value - 3f64.powf(0.01)).abs() < 1e-12);
    }

    #[test]
    fn huge_ball_gives_total_mass_one() {
        let m = periodic(4);
        let r = covering_sum_greedy(&m, 0.5, 4.0, 1_000_000).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn mollified_atom_covering_matches_k_power() {
        let m = periodic(3);
        let r = mollified_covering_sum(&m, 0.5, 0.01, 1_000_000).unwrap();
        assert!((r.value - 3f64.powf(0.5)).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_net_with_atom_centers_is_exact() {
        let m = periodic(3);
        let ShiftMeasure::Periodic(p) = &m else { unreachable!() };
        let net = p.atoms();
        let v = exhaustive_net_infimum(&m, 0.5, 0.01, &net, CoverCost::BallMass).unwrap();
        assert!((v - 3f64.powf(0.5)).abs() < 1e-12);
        let greedy = covering_sum_greedy(&m, 0.5, 0.01, 1_000_000).unwrap();
        assert!(greedy.value >= v - 1e-12);
    }

    #[test]
    fn uncoverable_net_is_rejected() {
        let m = periodic(3);
        let ShiftMeasure::Periodic(p) = &m else { unreachable!() };
        let net = vec![p.atom(0)];
        assert!(exhaustive_net_infimum(&m, 0.5, 0.01, &net, CoverCost::BallMass).is_err());
    }
}
