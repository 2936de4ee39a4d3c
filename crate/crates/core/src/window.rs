//! Bilateral sequence windows.
//!
//! A point of the full shift is an infinite bilateral sequence of alphabet
//! symbols. [`SeqWindow`] stores a finite centered window of symbols plus an
//! extension policy that defines every coordinate outside the window, so each
//! window denotes one genuine sequence. Shifts are represented lazily by an
//! integer offset, which keeps orbit segments cheap to form.

use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::measure::ChainTail;

/// How coordinates outside the stored window are produced.
#[derive(Debug, Clone)]
pub enum Extension {
    /// Every outside coordinate carries this symbol.
    Constant(Symbol),
    /// Outside coordinates repeat with the given period, folding back into
    /// the stored window from the nearest edge. A window whose entries are
    /// themselves `period`-periodic therefore denotes a periodic sequence.
    Periodic { period: usize },
    /// Outside coordinates continue a sampled Markov path deterministically
    /// from the window edges (forward on the right, time-reversed on the
    /// left).
    Chain(Arc<ChainTail>),
}

/// One bilateral sequence: a centered symbol window, an extension policy and
/// a shift offset.
#[derive(Clone)]
pub struct SeqWindow {
    alphabet: Arc<Alphabet>,
    half_width: usize,
    /// Symbols for data coordinates -half_width ..= half_width.
    symbols: Arc<Vec<Symbol>>,
    extension: Extension,
    /// Shift applied on top of the stored data: `coordinate(m)` reads data
    /// coordinate `m + shift`, so `shifted(k)` models applying the shift map
    /// k times.
    shift: i64,
}

impl std::fmt::Debug for SeqWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeqWindow")
            .field("half_width", &self.half_width)
            .field("shift", &self.shift)
            .field("extension", &self.extension)
            .finish()
    }
}

impl SeqWindow {
    /// Window with explicit symbols for coordinates `-N..=N` and an
    /// extension policy.
    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        symbols: Vec<Symbol>,
        extension: Extension,
    ) -> Result<Self> {
        if symbols.len() % 2 != 1 {
            return Err(Error::Parameter(
                "window length must be odd (2N+1 symbols)".into(),
            ));
        }
        let n_sym = alphabet.len() as u16;
        if symbols.iter().any(|&s| s >= n_sym) {
            return Err(Error::Parameter("symbol outside alphabet".into()));
        }
        let half_width = symbols.len() / 2;
        if let Extension::Periodic { period } = extension {
            if period == 0 || period > symbols.len() {
                return Err(Error::Parameter(
                    "periodic extension needs 1 <= period <= window length".into(),
                ));
            }
        }
        if let Extension::Constant(c) = extension {
            if c >= n_sym {
                return Err(Error::Parameter("constant symbol outside alphabet".into()));
            }
        }
        Ok(Self {
            alphabet,
            half_width,
            symbols: Arc::new(symbols),
            extension,
            shift: 0,
        })
    }

    /// The periodic sequence `... w w w ...` with `word[0]` at coordinate 0.
    ///
    /// The stored window is one period wide on each side so every entry
    /// already repeats with the word period.
    pub fn periodic(alphabet: Arc<Alphabet>, word: &[Symbol]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Parameter("empty periodic word".into()));
        }
        let p = word.len();
        let half = p;
        let symbols: Vec<Symbol> = (-(half as i64)..=half as i64)
            .map(|c| word[c.rem_euclid(p as i64) as usize])
            .collect();
        Self::from_parts(alphabet, symbols, Extension::Periodic { period: p })
    }

    /// The constant sequence on one symbol.
    pub fn constant(alphabet: Arc<Alphabet>, sym: Symbol) -> Result<Self> {
        Self::from_parts(alphabet, vec![sym, sym, sym], Extension::Constant(sym))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    /// The sequence shifted `k` times: `shifted(k).coordinate(m) ==
    /// self.coordinate(m - k)`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut w = self.clone();
        w.shift -= k;
        w
    }

    /// Symbol at data coordinate `u` (extension applied outside the window).
    fn data_at(&self, u: i64) -> Symbol {
        let n = self.half_width as i64;
        if u >= -n && u <= n {
            return self.symbols[(u + n) as usize];
        }
        match &self.extension {
            Extension::Constant(c) => *c,
            Extension::Periodic { period } => {
                let p = *period as i64;
                // Fold toward the window by whole periods from the nearer edge.
                let folded = if u > n {
                    u - p * ((u - n + p - 1) / p)
                } else {
                    u + p * ((-n - u + p - 1) / p)
                };
                debug_assert!(folded >= -n && folded <= n);
                self.symbols[(folded + n) as usize]
            }
            Extension::Chain(tail) => {
                if u > n {
                    tail.right((u - n - 1) as usize, self.symbols[self.symbols.len() - 1])
                } else {
                    tail.left((-u - n - 1) as usize, self.symbols[0])
                }
            }
        }
    }

    /// Symbol at sequence coordinate `m`.
    #[inline]
    pub fn coordinate(&self, m: i64) -> Symbol {
        self.data_at(m + self.shift)
    }

    /// Materializes coordinates `lo..=hi` into a flat vector.
    pub fn realize(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        assert!(lo <= hi);
        (lo..=hi).map(|m| self.coordinate(m)).collect()
    }

    /// Copy of the window with the symbol at one coordinate replaced.
    ///
    /// The coordinate must fall inside the stored window after the current
    /// shift is applied. Useful for building off-orbit candidate centers.
    pub fn with_symbol_at(&self, m: i64, sym: Symbol) -> Result<Self> {
        if sym as usize >= self.alphabet.len() {
            return Err(Error::Parameter("symbol outside alphabet".into()));
        }
        let u = m + self.shift;
        let n = self.half_width as i64;
        if u < -n || u > n {
            return Err(Error::Parameter(
                "coordinate outside the stored window".into(),
            ));
        }
        let mut symbols = (*self.symbols).clone();
        symbols[(u + n) as usize] = sym;
        Ok(Self {
            alphabet: self.alphabet.clone(),
            half_width: self.half_width,
            symbols: Arc::new(symbols),
            extension: self.extension.clone(),
            shift: self.shift,
        })
    }

    /// Period of the denoted sequence, when the extension makes one evident.
    pub fn sequence_period(&self) -> Option<usize> {
        match &self.extension {
            Extension::Constant(_) => {
                let c = self.symbols[0];
                if self.symbols.iter().all(|&s| s == c) {
                    Some(1)
                } else {
                    None
                }
            }
            Extension::Periodic { period } => {
                let p = *period;
                let len = self.symbols.len();
                let consistent = (0..len - p).all(|i| self.symbols[i] == self.symbols[i + p]);
                if consistent {
                    Some(p)
                } else {
                    None
                }
            }
            Extension::Chain(_) => None,
        }
    }

    /// True when the extension is eventually periodic on both tails, i.e.
    /// constant or periodic-fold. Chain extensions are not.
    pub fn has_periodic_tails(&self) -> bool {
        !matches!(self.extension, Extension::Chain(_))
    }

    /// Fold period of the tails for eventually periodic windows.
    pub(crate) fn tail_period(&self) -> Option<usize> {
        match &self.extension {
            Extension::Constant(_) => Some(1),
            Extension::Periodic { period } => Some(*period),
            Extension::Chain(_) => None,
        }
    }

    /// Data coordinates beyond which both tails are purely periodic, in
    /// sequence coordinates: for |m| > this bound the symbol comes from the
    /// folded tail.
    pub(crate) fn tail_start(&self) -> i64 {
        self.half_width as i64 + self.shift.abs() + 1
    }

    /// True when both windows denote the identical sequence for a trivially
    /// checkable reason (shared data and compatible shifts).
    pub fn same_sequence(&self, other: &Self) -> bool {
        if !same_alphabet(&self.alphabet, &other.alphabet) {
            return false;
        }
        if Arc::ptr_eq(&self.symbols, &other.symbols) {
            if self.shift == other.shift {
                return true;
            }
            if let (Some(p), Some(q)) = (self.sequence_period(), other.sequence_period()) {
                if p == q && (self.shift - other.shift).rem_euclid(p as i64) == 0 {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_window_repeats() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let w = SeqWindow::periodic(a, &[0, 1, 2]).unwrap();
        for m in -20..20 {
            assert_eq!(w.coordinate(m), w.coordinate(m + 3));
            assert_eq!(w.coordinate(m), (m.rem_euclid(3)) as Symbol);
        }
    }

    #[test]
    fn shift_moves_coordinates() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let w = SeqWindow::periodic(a, &[0, 1, 2]).unwrap();
        let s = w.shifted(1);
        for m in -10..10 {
            assert_eq!(s.coordinate(m), w.coordinate(m - 1));
        }
    }

    #[test]
    fn constant_extension_everywhere() {
        let a = Alphabet::unit(&["a", "b"]).unwrap();
        let w = SeqWindow::constant(a, 1).unwrap();
        assert_eq!(w.coordinate(-1000), 1);
        assert_eq!(w.coordinate(1000), 1);
        assert_eq!(w.sequence_period(), Some(1));
    }

    #[test]
    fn shift_by_period_is_same_sequence() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let w = SeqWindow::periodic(a, &[0, 1]).unwrap();
        let s2 = w.shifted(2);
        let s1 = w.shifted(1);
        assert!(w.same_sequence(&s2));
        assert!(!w.same_sequence(&s1));
    }

    #[test]
    fn mutated_center_keeps_tails() {
        let a = Alphabet::unit(&["a", "b", "c"]).unwrap();
        let w = SeqWindow::periodic(a, &[0, 1]).unwrap();
        let m = w.with_symbol_at(0, 2).unwrap();
        assert_eq!(m.coordinate(0), 2);
        assert_eq!(m.coordinate(1), 1);
        assert_eq!(m.coordinate(2), 0);
        // Tails still fold periodically.
        assert_eq!(m.coordinate(100), m.coordinate(102));
    }
}
