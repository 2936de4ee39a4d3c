//! The sub-exponential sequence metric and its window geometry.
//!
//! Distances between bilateral sequences are
//!
//! ```text
//! r(x, y) = sum over n in Z of min{ 1/(n^2 + 1), d(x_n, y_n) }
//! ```
//!
//! with `d` the alphabet distance. The coordinate weights are summable, and
//! the two-sided tail beyond depth `N` is bounded by `2/N`, which makes every
//! comparison against a threshold decidable to any accuracy by widening the
//! evaluation window. The weight sequence also ties metric balls to
//! coordinate windows: for every radius there is a cutoff depth such that the
//! metric ball is contained in the cylinder-style ball constraining exactly
//! the coordinates up to that depth.

use crate::alphabet::same_alphabet;
use crate::error::{Error, Result};
use crate::window::SeqWindow;

/// Weight of coordinate `n`, `1/(n^2 + 1)`.
#[inline]
pub fn coordinate_weight(n: i64) -> f64 {
    1.0 / ((n * n) as f64 + 1.0)
}

/// Upper bound on the two-sided weight tail beyond depth `n`:
/// `sum_{|m| > n} 1/(m^2+1) <= 2/n`.
#[inline]
pub fn tail_bound(n: usize) -> f64 {
    2.0 / n as f64
}

/// Exact value of the full weight sum `sum_{n in Z} 1/(n^2+1) = pi*coth(pi)`.
///
/// This is the distance between two sequences that differ by at least 1 at
/// every coordinate, and an upper bound for the metric diameter of any
/// sequence space over an alphabet of diameter >= 1.
pub fn total_weight() -> f64 {
    let e = (2.0 * std::f64::consts::PI).exp();
    std::f64::consts::PI * (e + 1.0) / (e - 1.0)
}

/// The window cutoff of a radius: the unique integer `n0 >= 0` with
/// `1/((n0+1)^2 + 1) <= eps < 1/(n0^2 + 1)`.
///
/// For `eps` below the alphabet separation, any two sequences closer than
/// `eps` must agree on all coordinates `|i| <= n0`, so the metric ball of
/// radius `eps` sits inside the depth-`n0` coordinate ball.
pub fn window_cutoff(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let guess = (1.0 / eps - 1.0).sqrt() as i64;
    for n in (guess - 2).max(0)..=guess + 2 {
        let n = n as usize;
        if coordinate_weight(n as i64 + 1) <= eps && eps < coordinate_weight(n as i64) {
            return Ok(n);
        }
    }
    // Unreachable for eps in (0,1): the weights decrease from 1 to 0.
    Err(Error::ScaleOutOfRange(eps))
}

/// The inner window of a radius: the smallest depth `n1` whose tail bound is
/// below `eps`, so that agreement on all coordinates `|i| <= n1` forces
/// `r(x, y) <= 2/n1 < eps`.
///
/// Cylinders of this depth are contained in the metric ball of radius `eps`,
/// giving the mass lower bound dual to [`window_cutoff`].
pub fn inner_window(eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    Ok((2.0 / eps).floor() as usize + 1)
}

/// Outcome of comparing a distance against a threshold with a finite
/// evaluation window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdOutcome {
    /// The distance is certainly on the inner side of the threshold.
    Within,
    /// The distance is certainly on the outer side.
    Outside,
    /// Not resolvable within the allowed depth; the true distance lies
    /// within the tail bound of the threshold.
    Indeterminate,
}

/// Approximate distance with certified accuracy.
///
/// Returns `r_hat` with `|r_hat - r(x, y)| <= tol`. The evaluation window is
/// grown until the analytic tail bound `2/N` meets `tol`; extension policies
/// supply all coordinates beyond the stored windows.
pub fn distance(x: &SeqWindow, y: &SeqWindow, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    if !same_alphabet(x.alphabet(), y.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    if x.same_sequence(y) {
        return Ok(0.0);
    }
    if let Some((v, err)) = distance_eventually_periodic(x, y) {
        if err <= tol {
            return Ok(v);
        }
    }
    let n_cut = (2.0 / tol).ceil() as i64;
    let alphabet = x.alphabet();
    let mut sum = alphabet.dist(x.coordinate(0), y.coordinate(0)).min(1.0);
    for n in 1..=n_cut {
        let w = coordinate_weight(n);
        sum += alphabet.dist(x.coordinate(n), y.coordinate(n)).min(w);
        sum += alphabet.dist(x.coordinate(-n), y.coordinate(-n)).min(w);
    }
    Ok(sum)
}

/// Membership in the coordinate ball `B^n(x, eps)`: true iff
/// `d(x_i, y_i) < eps` for every `|i| <= n`.
pub fn in_cylinder_ball(x: &SeqWindow, y: &SeqWindow, eps: f64, n: usize) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    if !same_alphabet(x.alphabet(), y.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let alphabet = x.alphabet();
    for i in -(n as i64)..=n as i64 {
        if alphabet.dist(x.coordinate(i), y.coordinate(i)) >= eps {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares `r(x, y)` against a threshold without evaluating the full sum.
///
/// `strict` selects the predicate: `r < thresh` when strict (open-ball
/// membership), `r <= thresh` otherwise (correlation-sum counting). The
/// partial sum gives a certain `Outside` as soon as it passes the threshold;
/// a certain `Within` needs the tail bound, checked as the window deepens up
/// to `max_depth`.
pub fn compare_threshold(
    x: &SeqWindow,
    y: &SeqWindow,
    thresh: f64,
    strict: bool,
    max_depth: usize,
) -> Result<ThresholdOutcome> {
    if !same_alphabet(x.alphabet(), y.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    if x.same_sequence(y) {
        return Ok(if strict && !(0.0 < thresh) {
            ThresholdOutcome::Outside
        } else {
            ThresholdOutcome::Within
        });
    }
    if let Some((v, err)) = distance_eventually_periodic(x, y) {
        let inside = if strict {
            v + err < thresh
        } else {
            v + err <= thresh
        };
        let outside = if strict {
            v - err >= thresh
        } else {
            v - err > thresh
        };
        return Ok(match (inside, outside) {
            (true, _) => ThresholdOutcome::Within,
            (_, true) => ThresholdOutcome::Outside,
            _ => ThresholdOutcome::Indeterminate,
        });
    }
    let alphabet = x.alphabet();
    let mut partial = alphabet.dist(x.coordinate(0), y.coordinate(0)).min(1.0);
    let mut depth = 0usize;
    loop {
        if strict && partial >= thresh {
            return Ok(ThresholdOutcome::Outside);
        }
        if !strict && partial > thresh {
            return Ok(ThresholdOutcome::Outside);
        }
        if depth > 0 {
            let upper = partial + tail_bound(depth);
            if (strict && upper < thresh) || (!strict && upper <= thresh) {
                return Ok(ThresholdOutcome::Within);
            }
        }
        if depth >= max_depth {
            return Ok(ThresholdOutcome::Indeterminate);
        }
        depth += 1;
        let w = coordinate_weight(depth as i64);
        let d = depth as i64;
        partial += alphabet.dist(x.coordinate(d), y.coordinate(d)).min(w);
        partial += alphabet.dist(x.coordinate(-d), y.coordinate(-d)).min(w);
    }
}

/// Near-exact distance for a pair of windows whose tails are both eventually
/// periodic (constant or periodic-fold extensions).
///
/// Returns `(value, error_bound)` with the error coming from the analytic
/// tail evaluation, around 1e-9. `None` when either window has a sampled
/// chain extension.
pub fn distance_eventually_periodic(x: &SeqWindow, y: &SeqWindow) -> Option<(f64, f64)> {
    let px = x.tail_period()?;
    let py = y.tail_period()?;
    let period = lcm(px, py);
    let alphabet = x.alphabet();
    let tails_from = x.tail_start().max(y.tail_start()) + period as i64;
    // Beyond the head, min(w, d) must equal w wherever d > 0.
    let sep_depth = (1.0 / alphabet.sep()).sqrt() as i64 + 2;
    let head = tails_from.max(sep_depth).max(1000);

    let mut sum = alphabet.dist(x.coordinate(0), y.coordinate(0)).min(1.0);
    for n in 1..=head {
        let w = coordinate_weight(n);
        sum += alphabet.dist(x.coordinate(n), y.coordinate(n)).min(w);
        sum += alphabet.dist(x.coordinate(-n), y.coordinate(-n)).min(w);
    }
    // Each tail is periodic with the combined period. A residue whose symbols
    // differ contributes the full weight subseries; identical residues
    // contribute nothing.
    let l = period as i64;
    for a in 1..=l {
        if alphabet.dist(x.coordinate(head + a), y.coordinate(head + a)) > 0.0 {
            sum += weight_subseries(head + a, l);
        }
        if alphabet.dist(x.coordinate(-head - a), y.coordinate(-head - a)) > 0.0 {
            sum += weight_subseries(head + a, l);
        }
    }
    // Dropping the +1 in each tail denominator costs at most sum 1/n^4 over
    // the tail, below 1/(3 (head-1)^3); trigamma truncation is smaller.
    let err = 1.0 / ((head - 1).pow(3) as f64) + 1e-12;
    Some((sum, err))
}

/// `sum_{j >= 0} 1/((b + j*l)^2 + 1)` evaluated through the trigamma
/// function of `b/l`, ignoring the +1 (absorbed in the caller's error bound).
fn weight_subseries(b: i64, l: i64) -> f64 {
    let l = l as f64;
    trigamma(b as f64 / l) / (l * l)
}

/// Trigamma via upward recurrence and the asymptotic expansion.
fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 40.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + inv * (1.0 + inv / 2.0 + inv2 / 6.0 - inv2 * inv2 / 30.0 + inv2 * inv2 * inv2 / 42.0)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    #[test]
    fn cutoff_matches_defining_inequality() {
        assert_eq!(window_cutoff(0.6).unwrap(), 0);
        assert_eq!(window_cutoff(0.2).unwrap(), 1);
        assert_eq!(window_cutoff(0.05).unwrap(), 4);
        for k in 1..60i64 {
            let eps = coordinate_weight(k);
            assert_eq!(window_cutoff(eps).unwrap(), (k - 1) as usize);
        }
    }

    #[test]
    fn cutoff_rejects_bad_scales() {
        assert!(window_cutoff(0.0).is_err());
        assert!(window_cutoff(1.0).is_err());
        assert!(window_cutoff(-0.5).is_err());
    }

    #[test]
    fn inner_window_tail_is_below_scale() {
        for &eps in &[0.9, 0.3, 0.05, 0.011] {
            let n1 = inner_window(eps).unwrap();
            assert!(tail_bound(n1) < eps);
            assert!(n1 == 1 || tail_bound(n1 - 1) >= eps);
        }
    }

    #[test]
    fn total_weight_matches_partial_sums() {
        let mut s = 1.0;
        for n in 1..2_000_000i64 {
            s += 2.0 * coordinate_weight(n);
        }
        assert!((total_weight() - s).abs() < 1e-5);
    }

    #[test]
    fn trigamma_matches_series() {
        for &x in &[0.5, 1.0, 2.7, 11.0] {
            let direct: f64 = (0..200_000).map(|j| 1.0 / ((x + j as f64) * (x + j as f64))).sum();
            assert!((trigamma(x) - direct).abs() < 1e-5);
        }
    }

    #[test]
    fn periodic_pair_distance_matches_walker() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let x = SeqWindow::periodic(a.clone(), &[0, 1, 2]).unwrap();
        let y = x.shifted(1);
        let (v, err) = distance_eventually_periodic(&x, &y).unwrap();
        // All coordinates differ by 1, so the distance is the full weight sum.
        assert!((v - total_weight()).abs() < 1e-6 + err);
    }
}
