//! CSV and plot-data emission.
//!
//! Every estimator or experiment row uses the same ten columns:
//! `experiment,method,eps,n,q,value,stderr,n_samples,seed,flag`.
//! Plot output is data-only: one two-column `.dat` file per curve plus a
//! `manifest.txt` naming them. Floats are printed with the shortest
//! round-trip representation, so identical runs produce byte-identical
//! files.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

pub const HEADER: &str = "experiment,method,eps,n,q,value,stderr,n_samples,seed,flag";

#[derive(Debug, Clone)]
pub struct Row {
    pub experiment: String,
    pub method: String,
    pub eps: f64,
    pub n: u64,
    pub q: f64,
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub flag: String,
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

impl Row {
    fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.method,
            format_float(self.eps),
            self.n,
            format_float(self.q),
            format_float(self.value),
            format_float(self.stderr),
            self.n_samples,
            self.seed,
            self.flag
        )
    }
}

/// A named two-column data series for external plotting.
#[derive(Debug, Clone)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Everything one run emits.
#[derive(Debug, Clone, Default)]
pub struct OutputSet {
    pub rows: Vec<Row>,
    pub curves: Vec<Curve>,
}

impl OutputSet {
    /// Writes `<name>.csv`, one `.dat` per curve and the curve manifest
    /// under `dir`. Returns the CSV path.
    pub fn write(&self, dir: &Path, name: &str) -> Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output dir {}", dir.display()))?;
        let csv_path = dir.join(format!("{name}.csv"));
        let mut csv = String::with_capacity(64 * (self.rows.len() + 1));
        csv.push_str(HEADER);
        csv.push('\n');
        for row in &self.rows {
            csv.push_str(&row.to_line());
            csv.push('\n');
        }
        std::fs::write(&csv_path, csv)
            .with_context(|| format!("writing {}", csv_path.display()))?;

        let mut manifest = String::new();
        for curve in &self.curves {
            let fname = format!("{name}__{}.dat", curve.name);
            let mut data = String::new();
            for (x, y) in &curve.points {
                data.push_str(&format_float(*x));
                data.push(' ');
                data.push_str(&format_float(*y));
                data.push('\n');
            }
            std::fs::write(dir.join(&fname), data)?;
            manifest.push_str(&format!("{} {fname}\n", curve.name));
        }
        let mut mf = std::fs::File::create(dir.join(format!("{name}__manifest.txt")))?;
        mf.write_all(manifest.as_bytes())?;
        Ok(csv_path)
    }
}
