//! Shift-invariant measures with exact cylinder masses.
//!
//! Two families are implemented. A periodic-orbit measure puts mass `1/k` on
//! each of the `k` shifts of a periodic sequence whose word has pairwise
//! distinct symbols. A cyclically perturbed Markov measure on `s` states
//! follows the chain with transition weight `1-kappa` along the cycle
//! `1 -> 2 -> ... -> s -> 1` and uniform leakage `kappa/(s-1)` elsewhere;
//! that matrix is doubly stochastic, so the uniform vector is stationary and
//! the induced bilateral measure is shift invariant. Cylinder masses are
//! exact products, which every estimator downstream leans on.

use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::window::{Extension, SeqWindow};

/// Row-stochasticity / double-stochasticity validation slack.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Default cap on the number of cylinders an exact enumeration may touch.
pub const DEFAULT_CYLINDER_BUDGET: u64 = 1_000_000;

/// `base^exp` saturating at `u128::MAX`, for cylinder-count budgeting.
pub fn checked_power(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// Splitmix64, used to derive independent deterministic seed streams.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform atomic measure on the finite orbit of a periodic sequence.
#[derive(Debug, Clone)]
pub struct PeriodicOrbitMeasure {
    alphabet: Arc<Alphabet>,
    word: Vec<Symbol>,
}

impl PeriodicOrbitMeasure {
    /// Builds the measure from an orbit word of pairwise distinct symbols.
    pub fn new(alphabet: Arc<Alphabet>, word: Vec<Symbol>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Parameter("empty orbit word".into()));
        }
        if word.iter().any(|&s| s as usize >= alphabet.len()) {
            return Err(Error::Parameter("symbol outside alphabet".into()));
        }
        let mut sorted = word.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != word.len() {
            return Err(Error::DuplicateStates);
        }
        Ok(Self { alphabet, word })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Orbit length `k`; each atom carries mass `1/k`.
    pub fn period(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    /// The `i`-th atom: the base periodic point shifted `i` times.
    pub fn atom(&self, i: usize) -> SeqWindow {
        SeqWindow::periodic(self.alphabet.clone(), &self.word)
            .expect("validated at construction")
            .shifted(i as i64)
    }

    /// All `k` atoms in orbit order.
    pub fn atoms(&self) -> Vec<SeqWindow> {
        (0..self.period()).map(|i| self.atom(i)).collect()
    }

    /// Number of orbit shifts whose central window matches the given word.
    fn matching_shifts(&self, c: &CylinderWord) -> usize {
        let k = self.period() as i64;
        let n = c.half_width() as i64;
        (0..k)
            .filter(|&i| {
                (-n..=n).all(|m| {
                    let sym = self.word[(m - i).rem_euclid(k) as usize];
                    sym == c.symbols()[(m + n) as usize]
                })
            })
            .count()
    }
}

/// The cyclically perturbed Markov measure on `s` distinct states.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    alphabet: Arc<Alphabet>,
    states: Vec<Symbol>,
    kappa: f64,
    /// Row-major `s x s` transition matrix over state indices.
    trans: Vec<f64>,
}

impl MarkovMeasure {
    /// Builds the matrix `p[i][i+1] = p[s][1] = 1-kappa`, all other entries
    /// `kappa/(s-1)`, and verifies it is doubly stochastic.
    pub fn build(alphabet: Arc<Alphabet>, states: Vec<Symbol>, kappa: f64) -> Result<Self> {
        let s = states.len();
        if s < 2 {
            return Err(Error::DegenerateSupport);
        }
        if states.iter().any(|&x| x as usize >= alphabet.len()) {
            return Err(Error::Parameter("state outside alphabet".into()));
        }
        let mut sorted = states.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != s {
            return Err(Error::DuplicateStates);
        }
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::KappaOutOfRange(kappa));
        }
        let leak = kappa / (s - 1) as f64;
        let mut trans = vec![leak; s * s];
        for i in 0..s {
            trans[i * s + (i + 1) % s] = 1.0 - kappa;
        }
        let m = Self {
            alphabet,
            states,
            kappa,
            trans,
        };
        for i in 0..s {
            let row: f64 = (0..s).map(|j| m.transition(i, j)).sum();
            let col: f64 = (0..s).map(|j| m.transition(j, i)).sum();
            if (row - 1.0).abs() > STOCHASTIC_TOL || (col - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Parameter(
                    "transition matrix failed the doubly stochastic check".into(),
                ));
            }
        }
        Ok(m)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    /// Transition probability between state indices.
    #[inline]
    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.trans[from * self.states.len() + to]
    }

    /// Index of an alphabet symbol in the state list, if it is a state.
    pub fn state_index(&self, sym: Symbol) -> Option<usize> {
        self.states.iter().position(|&s| s == sym)
    }

    /// `sum_j p_{ij}^q`, identical for every row of this construction:
    /// `(s-1)^{1-q} kappa^q + (1-kappa)^q`.
    pub fn row_power_sum(&self, q: f64) -> f64 {
        let s = self.state_count() as f64;
        (s - 1.0).powf(1.0 - q) * self.kappa.powf(q) + (1.0 - self.kappa).powf(q)
    }

    /// `sum_j p_{ij} ln p_{ij}`, identical for every row.
    pub fn row_log_mean(&self) -> f64 {
        let leak = self.kappa / (self.state_count() - 1) as f64;
        (1.0 - self.kappa) * (1.0 - self.kappa).ln() + self.kappa * leak.ln()
    }

    /// Draws one step of the chain from state index `from`.
    fn step(&self, from: usize, rng: &mut ChaCha8Rng) -> usize {
        let s = self.state_count();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for j in 0..s {
            acc += self.transition(from, j);
            if u < acc {
                return j;
            }
        }
        s - 1
    }

    /// Step of the time-reversed chain. The stationary vector is uniform and
    /// the matrix doubly stochastic, so reversal is plain transposition.
    fn step_back(&self, from: usize, rng: &mut ChaCha8Rng) -> usize {
        let s = self.state_count();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for j in 0..s {
            acc += self.transition(j, from);
            if u < acc {
                return j;
            }
        }
        s - 1
    }

    /// Samples a bilateral window of the stationary chain.
    ///
    /// Coordinate 0 is uniform over the states, coordinates `1..=half_len`
    /// follow the chain, coordinates `-1..=-half_len` follow the reversed
    /// chain. The result is deterministic in `seed`, and its extension policy
    /// continues both tails deterministically when deeper coordinates are
    /// read.
    pub fn sample_orbit(&self, half_len: usize, seed: u64) -> SeqWindow {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0xC0FFEE));
        let s = self.state_count();
        let center = (rng.gen::<u64>() % s as u64) as usize;
        let mut right = Vec::with_capacity(half_len);
        let mut cur = center;
        for _ in 0..half_len {
            cur = self.step(cur, &mut rng);
            right.push(cur);
        }
        let mut left = Vec::with_capacity(half_len);
        cur = center;
        for _ in 0..half_len {
            cur = self.step_back(cur, &mut rng);
            left.push(cur);
        }
        let mut symbols = Vec::with_capacity(2 * half_len + 1);
        for &idx in left.iter().rev() {
            symbols.push(self.states[idx]);
        }
        symbols.push(self.states[center]);
        for &idx in &right {
            symbols.push(self.states[idx]);
        }
        if symbols.len() == 1 {
            // Degenerate half_len = 0 still needs an odd window.
            symbols = vec![symbols[0]; 3];
        }
        let tail = Arc::new(ChainTail::new(self.clone(), seed));
        SeqWindow::from_parts(self.alphabet.clone(), symbols, Extension::Chain(tail))
            .expect("window construction from validated parts")
    }
}

/// Deterministic lazy continuation of a sampled chain window.
///
/// Each side owns an independent seeded stream; growing the cache is
/// order-insensitive because symbols are generated strictly sequentially
/// from the window edge.
pub struct ChainTail {
    measure: MarkovMeasure,
    seed: u64,
    right: Mutex<(Option<ChaCha8Rng>, Vec<Symbol>)>,
    left: Mutex<(Option<ChaCha8Rng>, Vec<Symbol>)>,
}

impl std::fmt::Debug for ChainTail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChainTail").field("seed", &self.seed).finish()
    }
}

impl ChainTail {
    fn new(measure: MarkovMeasure, seed: u64) -> Self {
        Self {
            measure,
            seed,
            right: Mutex::new((None, Vec::new())),
            left: Mutex::new((None, Vec::new())),
        }
    }

    /// Symbol `offset` steps beyond the right window edge.
    pub fn right(&self, offset: usize, edge: Symbol) -> Symbol {
        let mut guard = self.right.lock().expect("tail lock");
        let (rng_slot, cache) = &mut *guard;
        if rng_slot.is_none() {
            *rng_slot = Some(ChaCha8Rng::seed_from_u64(mix_seed(self.seed, 0x0001_1111)));
        }
        let rng = rng_slot.as_mut().expect("initialized above");
        while cache.len() <= offset {
            let cur = match cache.last() {
                Some(&sym) => self.measure.state_index(sym).expect("tail symbol is a state"),
                None => self.measure.state_index(edge).expect("edge symbol is a state"),
            };
            let next = self.measure.step(cur, rng);
            cache.push(self.measure.states[next]);
        }
        cache[offset]
    }

    /// Symbol `offset` steps beyond the left window edge.
    pub fn left(&self, offset: usize, edge: Symbol) -> Symbol {
        let mut guard = self.left.lock().expect("tail lock");
        let (rng_slot, cache) = &mut *guard;
        if rng_slot.is_none() {
            *rng_slot = Some(ChaCha8Rng::seed_from_u64(mix_seed(self.seed, 0x0002_2222)));
        }
        let rng = rng_slot.as_mut().expect("initialized above");
        while cache.len() <= offset {
            let cur = match cache.last() {
                Some(&sym) => self.measure.state_index(sym).expect("tail symbol is a state"),
                None => self.measure.state_index(edge).expect("edge symbol is a state"),
            };
            let next = self.measure.step_back(cur, rng);
            cache.push(self.measure.states[next]);
        }
        cache[offset]
    }
}

/// A centered coordinate word prescribing symbols at coordinates `-n..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderWord {
    half_width: usize,
    symbols: Vec<Symbol>,
}

impl CylinderWord {
    pub fn new(half_width: usize, symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.len() != 2 * half_width + 1 {
            return Err(Error::Parameter(format!(
                "cylinder word of half-width {half_width} needs {} symbols, got {}",
                2 * half_width + 1,
                symbols.len()
            )));
        }
        Ok(Self {
            half_width,
            symbols,
        })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// The central word of a sequence window at the given depth.
    pub fn from_window(x: &SeqWindow, half_width: usize) -> Self {
        let symbols = x.realize(-(half_width as i64), half_width as i64);
        Self {
            half_width,
            symbols,
        }
    }
}

/// Tagged union over the two measure families.
#[derive(Debug, Clone)]
pub enum ShiftMeasure {
    Periodic(PeriodicOrbitMeasure),
    Markov(MarkovMeasure),
}

impl ShiftMeasure {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        match self {
            ShiftMeasure::Periodic(m) => m.alphabet(),
            ShiftMeasure::Markov(m) => m.alphabet(),
        }
    }

    /// Symbols carrying positive mass.
    pub fn support_symbols(&self) -> &[Symbol] {
        match self {
            ShiftMeasure::Periodic(m) => m.word(),
            ShiftMeasure::Markov(m) => m.states(),
        }
    }

    /// Exact mass of a cylinder word.
    ///
    /// Markov: `(1/s) * prod p(a_i, a_{i+1})` over the word's consecutive
    /// pairs. Periodic: matching orbit shifts divided by the period. A word
    /// containing any symbol outside the support has mass 0; that is a value,
    /// not an error.
    pub fn cylinder_mass(&self, c: &CylinderWord) -> f64 {
        match self {
            ShiftMeasure::Periodic(m) => {
                if c.symbols().iter().any(|s| !m.word().contains(s)) {
                    return 0.0;
                }
                m.matching_shifts(c) as f64 / m.period() as f64
            }
            ShiftMeasure::Markov(m) => {
                let idx: Option<Vec<usize>> =
                    c.symbols().iter().map(|&s| m.state_index(s)).collect();
                let Some(idx) = idx else { return 0.0 };
                let mut mass = 1.0 / m.state_count() as f64;
                for pair in idx.windows(2) {
                    mass *= m.transition(pair[0], pair[1]);
                }
                mass
            }
        }
    }

    /// Minimum pairwise alphabet distance among the measure's support
    /// symbols. Errors when the support holds fewer than two symbols.
    pub fn min_separation(&self) -> Result<f64> {
        let syms = self.support_symbols();
        if syms.len() < 2 {
            return Err(Error::DegenerateSupport);
        }
        let alphabet = self.alphabet();
        let mut best = f64::INFINITY;
        for (i, &a) in syms.iter().enumerate() {
            for &b in &syms[i + 1..] {
                best = best.min(alphabet.dist(a, b));
            }
        }
        Ok(best)
    }

    /// Number of depth-`n` cylinder words over the support, saturating at
    /// `u128::MAX`.
    pub fn cylinder_count(&self, half_width: usize) -> u128 {
        match self {
            ShiftMeasure::Periodic(m) => m.period() as u128,
            ShiftMeasure::Markov(m) => {
                checked_power(m.state_count(), 2 * half_width + 1)
            }
        }
    }

    /// Iterates the masses of every positive-mass depth-`n` cylinder.
    ///
    /// Periodic supports enumerate their `k` atoms (distinct coordinates make
    /// every other word null). Markov supports enumerate all `s^{2n+1}`
    /// words. The budget guards the enumeration size.
    pub fn enumerate_cylinder_masses(
        &self,
        half_width: usize,
        budget: u64,
    ) -> Result<Vec<f64>> {
        let needed = self.cylinder_count(half_width);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        match self {
            ShiftMeasure::Periodic(m) => {
                let k = m.period();
                Ok(vec![1.0 / k as f64; k])
            }
            ShiftMeasure::Markov(m) => {
                let s = m.state_count();
                let len = 2 * half_width + 1;
                let mut digits = vec![0usize; len];
                let mut out = Vec::with_capacity(needed as usize);
                loop {
                    let mut mass = 1.0 / s as f64;
                    for w in digits.windows(2) {
                        mass *= m.transition(w[0], w[1]);
                    }
                    out.push(mass);
                    // Odometer step.
                    let mut pos = len;
                    loop {
                        if pos == 0 {
                            return Ok(out);
                        }
                        pos -= 1;
                        digits[pos] += 1;
                        if digits[pos] < s {
                            break;
                        }
                        digits[pos] = 0;
                    }
                }
            }
        }
    }
}
