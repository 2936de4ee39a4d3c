//! Estimator output records.

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact finite sum over cylinders or atoms.
    ExactCylinder,
    /// Closed-form expression.
    ClosedForm,
    /// Seeded Monte Carlo.
    MonteCarlo,
    /// Constructed covering (upper bound).
    GreedyCover,
    /// Orbit pair/tuple counting.
    CliqueCount,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactCylinder => "exact_cylinder",
            Method::ClosedForm => "closed_form",
            Method::MonteCarlo => "monte_carlo",
            Method::GreedyCover => "greedy_cover",
            Method::CliqueCount => "clique_count",
        }
    }
}

/// One estimator output with its provenance.
///
/// Exact methods report `stderr = 0`.
#[derive(Debug, Clone, Copy)]
pub struct EstimateReport {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub eps: f64,
    pub method: Method,
}

impl EstimateReport {
    /// Exact value at a scale.
    pub fn exact(value: f64, eps: f64, n_samples: u64, method: Method) -> Self {
        Self {
            value,
            stderr: 0.0,
            n_samples,
            seed: 0,
            eps,
            method,
        }
    }
}

/// One scale of a log-log quotient series.
#[derive(Debug, Clone, Copy)]
pub struct SlopePoint {
    pub eps: f64,
    /// The log numerator at this scale (log of the functional, or the
    /// logarithmic integrand for the order-1 branch).
    pub value: f64,
    /// `value / ((q-1) log eps)` or `value / log eps`; `None` when the scale
    /// was flagged and excluded.
    pub quotient: Option<f64>,
}

/// Per-scale quotient series standing in for a limsup/liminf.
///
/// The min and max of the finite-scale quotients are reported as the lower
/// and upper proxies; no extrapolation is claimed.
#[derive(Debug, Clone, Default)]
pub struct SlopeSeries {
    pub points: Vec<SlopePoint>,
}

impl SlopeSeries {
    pub fn quotients(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().filter_map(|p| p.quotient)
    }

    /// Smallest finite-scale quotient (liminf proxy).
    pub fn lower_proxy(&self) -> Option<f64> {
        self.quotients().fold(None, |acc: Option<f64>, q| {
            Some(acc.map_or(q, |a| a.min(q)))
        })
    }

    /// Largest finite-scale quotient (limsup proxy).
    pub fn upper_proxy(&self) -> Option<f64> {
        self.quotients().fold(None, |acc: Option<f64>, q| {
            Some(acc.map_or(q, |a| a.max(q)))
        })
    }
}

/// Mean and standard error of a sample, with fixed-order summation so the
/// result is identical for any worker count.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
