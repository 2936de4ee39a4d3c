//! Correlation sums over orbit segments.
//!
//! The correlation sum of order `q` counts the ordered `q`-tuples of shift
//! indices in `{0..n}` whose orbit points are pairwise within `eps`,
//! normalized by `n^q`. Tuples may repeat indices, and the written `n^q`
//! normalization is kept even though `(n+1)^q` tuples are counted; the
//! `(1+1/n)^q` discrepancy vanishes with `n`.
//!
//! Pairwise closeness is a threshold decision on the sequence metric, made
//! by walking coordinates outward with early exit and a tail bound. A pair
//! whose distance cannot be resolved within the walk depth is counted
//! optimistically (by its partial sum) and reported in the ambiguity count.
//! Tuple counting reduces to counting cliques of the thresholded distance
//! matrix, enumerated through nested intersections of adjacency bitsets.

use rayon::prelude::*;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::grid::ScaleGrid;
use crate::measure::checked_power;
use crate::metric::{coordinate_weight, inner_window, tail_bound, window_cutoff};
use crate::report::{SlopePoint, SlopeSeries};
use crate::window::SeqWindow;

/// Default depth cap for per-pair threshold walks.
pub const DEFAULT_PAIR_DEPTH: usize = 4096;

/// Complexity guard: orders above 4 are only accepted for short segments.
const HIGH_ORDER_SEGMENT_CAP: usize = 2000;

/// A realized orbit segment: the base sequence materialized far enough to
/// compare any two shifts in `0..=n` down to the walk depth.
pub struct OrbitSegment {
    alphabet: std::sync::Arc<Alphabet>,
    symbols: Vec<Symbol>,
    lo: i64,
    n: usize,
    margin: usize,
}

impl OrbitSegment {
    /// Realizes shifts `0..=n` of `x` with decision depth `margin`.
    pub fn new(x: &SeqWindow, n: usize, margin: usize) -> Self {
        let margin = margin.max(64);
        let lo = -(margin as i64);
        let hi = n as i64 + margin as i64;
        OrbitSegment {
            alphabet: x.alphabet().clone(),
            symbols: x.realize(lo, hi),
            lo,
            n,
            margin,
        }
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    fn sym(&self, coord: i64) -> Symbol {
        self.symbols[(coord - self.lo) as usize]
    }

    /// Resolves `r(point_i, point_j) <= eps` for every threshold in
    /// `thresholds` (any order), one outward walk per pair.
    ///
    /// Returns `(within, ambiguous)` bit flags per threshold. An ambiguous
    /// threshold could not be separated from the partial sum plus tail
    /// bound; its `within` flag then reflects the partial sum only.
    fn classify_pair(&self, i: usize, j: usize, thresholds: &[f64]) -> (Vec<bool>, Vec<bool>) {
        let mut within = vec![false; thresholds.len()];
        let mut ambiguous = vec![false; thresholds.len()];
        if i == j {
            within.fill(true);
            return (within, ambiguous);
        }
        let max_t = thresholds.iter().cloned().fold(0.0f64, f64::max);
        let (bi, bj) = (i as i64, j as i64);
        let mut partial = self
            .alphabet
            .dist(self.sym(bi), self.sym(bj))
            .min(1.0);
        let mut depth = 0usize;
        loop {
            if partial > max_t {
                // Every threshold is certainly exceeded.
                return (within, ambiguous);
            }
            if depth > 0 {
                let upper = partial + tail_bound(depth);
                let mut all_resolved = true;
                for (t_idx, &t) in thresholds.iter().enumerate() {
                    if upper <= t {
                        within[t_idx] = true;
                    } else if partial <= t {
                        all_resolved = false;
                    }
                }
                if all_resolved {
                    return (within, ambiguous);
                }
            }
            if depth >= self.margin {
                for (t_idx, &t) in thresholds.iter().enumerate() {
                    if !within[t_idx] && partial <= t {
                        within[t_idx] = true;
                        ambiguous[t_idx] = true;
                    }
                }
                return (within, ambiguous);
            }
            depth += 1;
            let w = coordinate_weight(depth as i64);
            let d = depth as i64;
            partial += self.alphabet.dist(self.sym(bi + d), self.sym(bj + d)).min(w);
            partial += self.alphabet.dist(self.sym(bi - d), self.sym(bj - d)).min(w);
        }
    }
}

/// Adjacency rows (including the diagonal) of the thresholded distance
/// matrix at one scale, plus the number of ambiguous pair decisions.
fn adjacency(seg: &OrbitSegment, eps: f64) -> (Vec<Vec<u64>>, u64) {
    let n = seg.n;
    let words = (n + 1).div_ceil(64);
    let thresholds = [eps];
    let rows: Vec<(Vec<u64>, u64)> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0u64; words];
            let mut amb = 0u64;
            row[i / 64] |= 1 << (i % 64);
            for j in 0..i {
                let (within, ambiguous) = seg.classify_pair(j, i, &thresholds);
                if within[0] {
                    row[j / 64] |= 1 << (j % 64);
                }
                if ambiguous[0] {
                    amb += 1;
                }
            }
            (row, amb)
        })
        .collect();
    // Mirror the strictly-lower part to keep rows symmetric.
    let mut full: Vec<Vec<u64>> = rows.iter().map(|(r, _)| r.clone()).collect();
    let ambiguous = rows.iter().map(|(_, a)| a).sum();
    for i in 0..=n {
        for j in 0..i {
            if full[i][j / 64] >> (j % 64) & 1 == 1 {
                full[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    (full, ambiguous)
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// Ordered `r`-tuples inside `set`, pairwise adjacent: `C(set, 1) = |set|`,
/// `C(set, r) = sum over t in set of C(set & adj_t, r-1)`.
fn clique_tuples(adj: &[Vec<u64>], set: &[u64], r: usize) -> u128 {
    if r == 1 {
        return popcount(set) as u128;
    }
    let mut total: u128 = 0;
    for (word_idx, &word) in set.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let t = word_idx * 64 + b;
            let next: Vec<u64> = set
                .iter()
                .zip(adj[t].iter())
                .map(|(a, b)| a & b)
                .collect();
            total += clique_tuples(adj, &next, r - 1);
        }
    }
    total
}

/// Correlation sum and the number of ambiguous pair decisions.
pub fn correlation_sum_detailed(
    x: &SeqWindow,
    q: u32,
    n: usize,
    eps: f64,
    margin: usize,
) -> Result<(f64, u64)> {
    if q < 2 {
        return Err(Error::OrderOutOfRange("integer q >= 2"));
    }
    if n == 0 {
        return Err(Error::Parameter("segment length n must be positive".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    if q > 4 && n > HIGH_ORDER_SEGMENT_CAP {
        return Err(Error::BudgetExceeded {
            needed: checked_power(n + 1, q as usize),
            budget: checked_power(HIGH_ORDER_SEGMENT_CAP + 1, 4).min(u64::MAX as u128) as u64,
        });
    }
    let seg = OrbitSegment::new(x, n, margin);
    let norm = (n as f64).powi(q as i32);
    if q == 2 {
        // Unordered pair counting is enough at order 2.
        let thresholds = [eps];
        let per_row: Vec<(u64, u64)> = (0..=n)
            .into_par_iter()
            .map(|i| {
                let mut cnt = 0u64;
                let mut amb = 0u64;
                for j in 0..i {
                    let (within, ambiguous) = seg.classify_pair(j, i, &thresholds);
                    if within[0] {
                        cnt += 1;
                    }
                    if ambiguous[0] {
                        amb += 1;
                    }
                }
                (cnt, amb)
            })
            .collect();
        let pairs: u64 = per_row.iter().map(|(c, _)| c).sum();
        let ambiguous: u64 = per_row.iter().map(|(_, a)| a).sum();
        let ordered = 2 * pairs + (n as u64 + 1);
        return Ok((ordered as f64 / norm, ambiguous));
    }
    let (adj, ambiguous) = adjacency(&seg, eps);
    let words = (n + 1).div_ceil(64);
    let mut universe = vec![u64::MAX; words];
    let extra = words * 64 - (n + 1);
    if extra > 0 {
        universe[words - 1] = u64::MAX >> extra;
    }
    let count = clique_tuples(&adj, &universe, q as usize);
    Ok((count as f64 / norm, ambiguous))
}

/// Correlation sum of order `q` over the first `n` shifts at radius `eps`.
pub fn correlation_sum(x: &SeqWindow, q: u32, n: usize, eps: f64) -> Result<f64> {
    correlation_sum_detailed(x, q, n, eps, DEFAULT_PAIR_DEPTH).map(|(v, _)| v)
}

/// Correlation sum with pair closeness replaced by agreement of the
/// depth-`d` coordinate windows.
///
/// Window agreement is an equivalence, so the ordered tuple count is the sum
/// of `q`-th powers of window multiplicities, computed in one pass.
pub fn windowed_correlation_sum(x: &SeqWindow, q: u32, n: usize, depth: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::OrderOutOfRange("integer q >= 2"));
    }
    if n == 0 {
        return Err(Error::Parameter("segment length n must be positive".into()));
    }
    let seg = x.realize(-(depth as i64), n as i64 + depth as i64);
    let width = 2 * depth + 1;
    let mut counts: std::collections::HashMap<&[Symbol], u64> = std::collections::HashMap::new();
    for i in 0..=n {
        *counts.entry(&seg[i..i + width]).or_insert(0) += 1;
    }
    let total: u128 = counts
        .values()
        .map(|&c| checked_power(c as usize, q as usize))
        .sum();
    Ok(total as f64 / (n as f64).powi(q as i32))
}

/// Bracket of the correlation sum by window agreement at the two canonical
/// depths of the radius.
///
/// Below the alphabet separation, pairs within `eps` must agree on the
/// cutoff window (upper count) and pairs agreeing on the inner window are
/// within `eps` (lower count), so the metric correlation sum lies between
/// the two.
pub fn correlation_sum_bracket(
    x: &SeqWindow,
    q: u32,
    n: usize,
    eps: f64,
) -> Result<(f64, f64)> {
    let sep = x.alphabet().sep();
    if !(eps > 0.0 && eps < sep.min(1.0)) {
        return Err(Error::ScaleOutOfRange(eps));
    }
    let n0 = window_cutoff(eps)?;
    let n1 = inner_window(eps)?;
    let lower = windowed_correlation_sum(x, q, n, n1)?;
    let upper = windowed_correlation_sum(x, q, n, n0)?;
    Ok((lower, upper))
}

/// Per-scale quotient series `log C_q / ((q-1) log eps)` over a grid.
///
/// Scales where the correlation sum vanishes are flagged and excluded from
/// the slopes.
pub fn correlation_dimension_proxy(
    x: &SeqWindow,
    q: u32,
    n: usize,
    grid: &ScaleGrid,
    margin: usize,
) -> Result<SlopeSeries> {
    if q < 2 {
        return Err(Error::OrderOutOfRange("integer q >= 2"));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &eps in grid.radii() {
        let (c, _amb) = correlation_sum_detailed(x, q, n, eps, margin)?;
        let quotient = if c > 0.0 {
            Some(c.ln() / ((q as f64 - 1.0) * eps.ln()))
        } else {
            None
        };
        points.push(SlopePoint {
            eps,
            value: if c > 0.0 { c.ln() } else { f64::NEG_INFINITY },
            quotient,
        });
    }
    Ok(SlopeSeries { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::metric::total_weight;

    #[test]
    fn all_pairs_qualify_above_the_diameter() {
        let a = Alphabet::unit(&["a", "b"]).unwrap();
        let x = SeqWindow::periodic(a, &[0, 1]).unwrap();
        let n = 6;
        let eps = total_weight() + 1.0;
        let c = correlation_sum(&x, 2, n, eps).unwrap();
        let expect = ((n + 1) * (n + 1)) as f64 / (n * n) as f64;
        assert!((c - expect).abs() < 1e-12);
    }

    #[test]
    fn only_diagonal_tuples_below_all_distances() {
        // Period above the segment length: no repeated orbit points.
        let a = Alphabet::unit(&["a", "b", "c", "d", "e", "f", "g"]).unwrap();
        let x = SeqWindow::periodic(a, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        let n = 5;
        for q in [2u32, 3] {
            let c = correlation_sum(&x, q, n, 1e-3).unwrap();
            let expect = (n + 1) as f64 / (n as f64).powi(q as i32);
            assert!((c - expect).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn period_two_pair_classes() {
        let a = Alphabet::unit(&["a", "b"]).unwrap();
        let x = SeqWindow::periodic(a, &[0, 1]).unwrap();
        // Residue classes {0,2,4} and {1,3}: 9 + 4 ordered pairs over n^2.
        let c = correlation_sum(&x, 2, 4, 0.5).unwrap();
        assert!((c - 13.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn high_order_needs_short_segments() {
        let a = Alphabet::unit(&["a", "b"]).unwrap();
        let x = SeqWindow::periodic(a, &[0, 1]).unwrap();
        assert!(matches!(
            correlation_sum(&x, 5, 2001, 0.5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn windowed_count_matches_direct_on_periodic() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let x = SeqWindow::periodic(a, &[0, 1, 2]).unwrap();
        // Depth-1 windows of a period-3 sequence collide exactly on the
        // residue classes: same count as the metric sum at a sub-separation
        // radius whose windows have those depths.
        let direct = correlation_sum(&x, 2, 9, 0.05).unwrap();
        let windowed = windowed_correlation_sum(&x, 2, 9, inner_window(0.05).unwrap()).unwrap();
        assert!((direct - windowed).abs() < 1e-12);
    }
}

