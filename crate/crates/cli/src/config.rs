//! Flat key-value experiment configuration.
//!
//! The format is one `key = value` pair per line, `#` comments, blank lines
//! ignored. Recognized keys:
//!
//! | key              | meaning                                            |
//! |------------------|----------------------------------------------------|
//! | experiment       | pesin-convergence, divergence, periodic-lower, sandwich, recurrence |
//! | measure.kind     | periodic or markov                                  |
//! | measure.states   | comma-separated symbol labels                       |
//! | measure.kappa    | perturbation weight in (0,1), markov only           |
//! | measure.period   | orbit length, periodic only (defaults to the state count) |
//! | q                | order parameter (covering exponent for periodic-lower) |
//! | grid.kind        | dyadic or inverse_square                            |
//! | grid.count       | number of grid scales                               |
//! | budget.samples   | Monte-Carlo / orbit / horizon budget                |
//! | budget.cylinders | exact-enumeration budget                            |
//! | seed             | base RNG seed                                       |
//! | out              | output directory                                    |
//!
//! Unknown keys are errors: a silently ignored typo would change what an
//! experiment computes without changing its output schema.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use shiftdim_core::{
    Alphabet, GridKind, MarkovMeasure, PeriodicOrbitMeasure, ScaleGrid, ShiftMeasure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    PesinConvergence,
    Divergence,
    PeriodicLower,
    Sandwich,
    Recurrence,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PesinConvergence => "pesin-convergence",
            ExperimentKind::Divergence => "divergence",
            ExperimentKind::PeriodicLower => "periodic-lower",
            ExperimentKind::Sandwich => "sandwich",
            ExperimentKind::Recurrence => "recurrence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Periodic,
    Markov,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub experiment: Option<ExperimentKind>,
    pub measure_kind: MeasureKind,
    pub states: Vec<String>,
    pub kappa: Option<f64>,
    pub period: Option<usize>,
    pub q: f64,
    pub grid_kind: GridKind,
    pub grid_count: usize,
    pub budget_samples: u64,
    pub budget_cylinders: u64,
    pub seed: u64,
    pub out: PathBuf,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if kv.insert(key.clone(), value).is_some() {
                bail!("duplicate key {key:?}");
            }
        }

        const KNOWN: &[&str] = &[
            "experiment",
            "measure.kind",
            "measure.states",
            "measure.kappa",
            "measure.period",
            "q",
            "grid.kind",
            "grid.count",
            "budget.samples",
            "budget.cylinders",
            "seed",
            "out",
        ];
        for key in kv.keys() {
            if !KNOWN.contains(&key.as_str()) {
                bail!("unknown config key {key:?}");
            }
        }

        let experiment = match kv.get("experiment").map(String::as_str) {
            None => None,
            Some("pesin-convergence") => Some(ExperimentKind::PesinConvergence),
            Some("divergence") => Some(ExperimentKind::Divergence),
            Some("periodic-lower") => Some(ExperimentKind::PeriodicLower),
            Some("sandwich") => Some(ExperimentKind::Sandwich),
            Some("recurrence") => Some(ExperimentKind::Recurrence),
            Some(other) => bail!("unknown experiment {other:?}"),
        };
        let measure_kind = match kv
            .get("measure.kind")
            .ok_or_else(|| anyhow!("missing measure.kind"))?
            .as_str()
        {
            "periodic" => MeasureKind::Periodic,
            "markov" => MeasureKind::Markov,
            other => bail!("unknown measure.kind {other:?}"),
        };
        let states: Vec<String> = kv
            .get("measure.states")
            .ok_or_else(|| anyhow!("missing measure.states"))?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if states.is_empty() {
            bail!("measure.states is empty");
        }
        let kappa = kv
            .get("measure.kappa")
            .map(|v| v.parse::<f64>().context("measure.kappa"))
            .transpose()?;
        let period = kv
            .get("measure.period")
            .map(|v| v.parse::<usize>().context("measure.period"))
            .transpose()?;
        match measure_kind {
            MeasureKind::Markov => {
                if kappa.is_none() {
                    bail!("markov measures need measure.kappa");
                }
                if period.is_some() {
                    bail!("measure.period is only valid for periodic measures");
                }
            }
            MeasureKind::Periodic => {
                if kappa.is_some() {
                    bail!("measure.kappa is only valid for markov measures");
                }
                if let Some(p) = period {
                    if p != states.len() {
                        bail!(
                            "measure.period {} does not match the {} listed states",
                            p,
                            states.len()
                        );
                    }
                }
            }
        }
        let q = kv
            .get("q")
            .map(|v| v.parse::<f64>().context("q"))
            .transpose()?
            .unwrap_or(2.0);
        let grid_kind = match kv.get("grid.kind").map(String::as_str) {
            None | Some("inverse_square") => GridKind::InverseSquare,
            Some("dyadic") => GridKind::Dyadic,
            Some(other) => bail!("unknown grid.kind {other:?}"),
        };
        let grid_count = kv
            .get("grid.count")
            .map(|v| v.parse::<usize>().context("grid.count"))
            .transpose()?
            .unwrap_or(11);
        let budget_samples = kv
            .get("budget.samples")
            .map(|v| v.parse::<u64>().context("budget.samples"))
            .transpose()?
            .unwrap_or(10_000);
        let budget_cylinders = kv
            .get("budget.cylinders")
            .map(|v| v.parse::<u64>().context("budget.cylinders"))
            .transpose()?
            .unwrap_or(1_000_000);
        let seed = kv
            .get("seed")
            .map(|v| v.parse::<u64>().context("seed"))
            .transpose()?
            .unwrap_or(0);
        let out = PathBuf::from(kv.get("out").map(String::as_str).unwrap_or("out"));

        Ok(Config {
            experiment,
            measure_kind,
            states,
            kappa,
            period,
            q,
            grid_kind,
            grid_count,
            budget_samples,
            budget_cylinders,
            seed,
            out,
        })
    }

    /// The configured measure over the unit-separated alphabet on the listed
    /// state labels.
    pub fn build_measure(&self) -> Result<ShiftMeasure> {
        let refs: Vec<&str> = self.states.iter().map(String::as_str).collect();
        let alphabet = Alphabet::unit(&refs)?;
        let symbols: Vec<u16> = (0..self.states.len() as u16).collect();
        Ok(match self.measure_kind {
            MeasureKind::Periodic => {
                ShiftMeasure::Periodic(PeriodicOrbitMeasure::new(alphabet, symbols)?)
            }
            MeasureKind::Markov => ShiftMeasure::Markov(MarkovMeasure::build(
                alphabet,
                symbols,
                self.kappa.expect("validated at parse"),
            )?),
        })
    }

    pub fn build_grid(&self) -> Result<ScaleGrid> {
        Ok(match self.grid_kind {
            GridKind::Dyadic => ScaleGrid::dyadic(self.grid_count)?,
            GridKind::InverseSquare => ScaleGrid::inverse_square(self.grid_count)?,
        })
    }
}
