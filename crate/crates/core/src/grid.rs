//! Scale grids for the limsup/liminf proxies.

use crate::error::{Error, Result};
use crate::metric::coordinate_weight;

/// Provenance of a scale grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Radii `2^-j` for consecutive `j`.
    Dyadic,
    /// Radii exactly `1/(k^2+1)` for consecutive integers `k`; the window
    /// cutoff at these scales is exactly `k-1`, which removes cutoff jitter.
    InverseSquare,
}

/// A strictly decreasing list of radii in (0, 1).
#[derive(Debug, Clone)]
pub struct ScaleGrid {
    kind: GridKind,
    radii: Vec<f64>,
}

impl ScaleGrid {
    /// Dyadic grid `2^-1 .. 2^-count`.
    pub fn dyadic(count: usize) -> Result<Self> {
        if count == 0 || count > 1000 {
            return Err(Error::InvalidGrid(format!("bad dyadic count {count}")));
        }
        let radii = (1..=count as i32).map(|j| 2f64.powi(-j)).collect();
        Ok(Self {
            kind: GridKind::Dyadic,
            radii,
        })
    }

    /// Inverse-square grid `1/(k^2+1)` for `k = 2 .. count+1`.
    pub fn inverse_square(count: usize) -> Result<Self> {
        Self::inverse_square_from(2, count)
    }

    /// Inverse-square grid for `count` consecutive integers starting at `k0 >= 1`.
    pub fn inverse_square_from(k0: usize, count: usize) -> Result<Self> {
        if k0 == 0 {
            return Err(Error::InvalidGrid("inverse-square grid needs k >= 1".into()));
        }
        if count == 0 || count > 100_000 {
            return Err(Error::InvalidGrid(format!("bad grid count {count}")));
        }
        let radii = (k0..k0 + count)
            .map(|k| coordinate_weight(k as i64))
            .collect();
        Ok(Self {
            kind: GridKind::InverseSquare,
            radii,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// The integer `k` of an inverse-square grid entry, when it is one.
    pub fn inverse_square_index(&self, pos: usize) -> Option<usize> {
        if self.kind != GridKind::InverseSquare {
            return None;
        }
        let eps = self.radii[pos];
        let k = (1.0 / eps - 1.0).sqrt().round() as usize;
        (coordinate_weight(k as i64) == eps).then_some(k)
    }
}
