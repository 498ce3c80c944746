//! Empirical check that scaled per-hop projection sums concentrate.
//!
//! For each `n`, `M(n) * sum_{i <= 1/M(n)} X_i` is compared against the mean
//! `E X` over many replications. The deviation should shrink like
//! `sqrt(M(n))` and the exceedance rate of a fixed threshold should vanish.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::drift::closed_form_drift;
use crate::error::{Error, Result};
use crate::geometry::transmission_range;
use crate::seed::SeedStream;
use crate::strategies::StrategySpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub m: f64,
    /// Number of summed terms, `floor(1 / M)`.
    pub terms: u64,
    pub max_deviation: f64,
    pub mean_abs_deviation: f64,
    /// Fraction of replications with deviation above the threshold.
    pub exceedance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub strategy: String,
    pub k: f64,
    pub threshold: f64,
    pub trials: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Least-squares slope of `ln(mean |deviation|)` against `ln M`.
    pub fn deviation_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.mean_abs_deviation > 0.0)
            .map(|r| (r.m.ln(), r.mean_abs_deviation.ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,terms,max_deviation,mean_abs_deviation,exceedance\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                crate::output::fmt_float(r.m),
                r.terms,
                crate::output::fmt_float(r.max_deviation),
                crate::output::fmt_float(r.mean_abs_deviation),
                crate::output::fmt_float(r.exceedance)
            ));
        }
        out
    }
}

/// Runs `trials` replications at each `n` of `n_list` (ascending, at least
/// three entries) with range constant `k`, counting deviations above
/// `threshold`.
pub fn triangular_array_check(
    spec: &StrategySpec,
    n_list: &[u64],
    k: f64,
    trials: usize,
    threshold: f64,
    seed: u64,
) -> Result<ConvergenceTable> {
    if n_list.len() < 3 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "triangular_array_check",
            "n_list must be strictly ascending with at least three entries",
        ));
    }
    if trials == 0 {
        return Err(Error::domain("triangular_array_check", "trials must be positive"));
    }
    spec.validate()?;
    let mean = closed_form_drift(spec);
    let stream = SeedStream::new(seed, format!("triangular/{}", spec.label()));
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let m = transmission_range(n, k)?;
        let terms = (1.0 / m).floor() as u64;
        let level = stream.child(&n.to_string());
        let deviations = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = level.trial_rng(t);
                let mut sum = 0.0;
                for _ in 0..terms {
                    sum += spec.sample(1.0, &mut rng)?.step.projection();
                }
                Ok((m * sum - mean).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        let mean_abs_deviation = deviations.iter().sum::<f64>() / trials as f64;
        let exceed = deviations.iter().filter(|&&d| d > threshold).count();
        rows.push(ConvergenceRow {
            n,
            m,
            terms,
            max_deviation,
            mean_abs_deviation,
            exceedance: exceed as f64 / trials as f64,
        });
    }
    Ok(ConvergenceTable {
        strategy: spec.label(),
        k,
        threshold,
        trials,
        rows,
    })
}
