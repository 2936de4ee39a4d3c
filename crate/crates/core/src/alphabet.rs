//! Finite embedded alphabets.
//!
//! An [`Alphabet`] is a finite labeled point set together with its full
//! pairwise distance matrix. It stands in for the compact base space from
//! which bilateral sequences are formed: every measure implemented here is
//! supported on finitely many points, so a distance matrix is all the
//! geometry the estimators ever consult.

use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a symbol inside its alphabet.
pub type Symbol = u16;

/// A finite labeled point set with an explicit distance matrix.
///
/// Invariants enforced at construction: the matrix is symmetric with zero
/// diagonal, satisfies the triangle inequality on all triples, and the
/// minimum off-diagonal entry (`sep`) is strictly positive. At least two
/// symbols are required.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    labels: Vec<String>,
    dist: Vec<f64>,
    sep: f64,
}

impl Alphabet {
    /// Builds an alphabet from labels and a square distance matrix.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Arc<Self>> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::InvalidAlphabet(
                "at least 2 symbols are required".into(),
            ));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAlphabet(format!(
                "distance matrix must be {n}x{n}"
            )));
        }
        {
            let mut seen: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != n {
                return Err(Error::InvalidAlphabet("duplicate labels".into()));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &dist {
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidAlphabet(
                        "distances must be finite and nonnegative".into(),
                    ));
                }
                flat.push(v);
            }
        }
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(Error::InvalidAlphabet("diagonal must be zero".into()));
            }
            for j in 0..n {
                if flat[i * n + j] != flat[j * n + i] {
                    return Err(Error::InvalidAlphabet("matrix must be symmetric".into()));
                }
                if i != j && flat[i * n + j] <= 0.0 {
                    return Err(Error::InvalidAlphabet(
                        "off-diagonal distances must be positive".into(),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if flat[i * n + j] > flat[i * n + k] + flat[k * n + j] + 1e-12 {
                        return Err(Error::InvalidAlphabet(format!(
                            "triangle inequality fails on ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        let mut sep = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sep = sep.min(flat[i * n + j]);
                }
            }
        }
        Ok(Arc::new(Self {
            labels,
            dist: flat,
            sep,
        }))
    }

    /// Alphabet where every pair of distinct symbols is at distance 1.
    pub fn unit(labels: &[&str]) -> Result<Arc<Self>> {
        let n = labels.len();
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Self::new(labels.iter().map(|s| s.to_string()).collect(), dist)
    }

    /// Alphabet where every pair of distinct symbols is at distance `d`.
    pub fn uniform(labels: &[&str], d: f64) -> Result<Arc<Self>> {
        let n = labels.len();
        let dist: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { d }).collect())
            .collect();
        Self::new(labels.iter().map(|s| s.to_string()).collect(), dist)
    }

    /// Loads an alphabet from a text file.
    ///
    /// Format: a header line holding the symbol count `n`, then `n` rows of
    /// `n` whitespace-separated decimals (the full distance matrix). Symbols
    /// are labeled `s0..s{n-1}` in row order.
    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Arc<Self>> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file)
    }

    /// Same as [`Alphabet::from_file`], reading from any source.
    pub fn from_reader<R: Read>(reader: R) -> Result<Arc<Self>> {
        let mut lines = BufReader::new(reader).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidAlphabet("empty file".into()))??;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::InvalidAlphabet(format!("bad symbol count {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse::<f64>).collect();
            let row =
                row.map_err(|_| Error::InvalidAlphabet(format!("bad matrix row {line:?}")))?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::InvalidAlphabet(format!(
                "expected {n} matrix rows, found {}",
                rows.len()
            )));
        }
        let labels = (0..n).map(|i| format!("s{i}")).collect();
        Self::new(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, s: Symbol) -> &str {
        &self.labels[s as usize]
    }

    pub fn index_of(&self, label: &str) -> Option<Symbol> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Symbol)
    }

    /// Distance between two symbols.
    #[inline]
    pub fn dist(&self, a: Symbol, b: Symbol) -> f64 {
        self.dist[a as usize * self.labels.len() + b as usize]
    }

    /// Minimum off-diagonal distance; strictly positive by construction.
    pub fn sep(&self) -> f64 {
        self.sep
    }

    /// Largest pairwise distance.
    pub fn max_dist(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }
}

/// Two alphabet handles denote the same alphabet if they are the same
/// allocation or structurally equal.
pub fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
