//! The eight node-level delay experiments (source at the origin,
//! destination at (0.7, 0.7), 150 trials each) compared against the
//! published means.

use serde::{Deserialize, Serialize};

use crate::analytics::closed_form_drift;
use crate::discrete::{calibrate_range, discrete_ensemble_with, DiscreteOptions};
use crate::error::Result;
use crate::geometry::ScalingParams;
use crate::histogram::DelayHistogram;
use crate::output::{fmt_float, round_sig9};
use crate::seed::SeedStream;
use crate::strategies::StrategySpec;

/// Range used for the 1000-node experiments: one seventh of the unit
/// distance, i.e. `K = 1.717`.
pub const SMALL_RANGE: f64 = 1.0 / 7.0;
/// Greedy mean the 10000-node range is calibrated to.
pub const LARGE_GREEDY_TARGET: f64 = 28.0;
/// Fields averaged per calibration step.
pub const CALIBRATION_TRIALS: usize = 150;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperExperiment {
    pub label: String,
    pub n: u64,
    pub strategy: StrategySpec,
    pub paper_mean: f64,
    /// Accepted interval for the simulated mean.
    pub lo: f64,
    pub hi: f64,
}

fn experiment(label: &str, n: u64, strategy: StrategySpec, paper_mean: f64, lo: f64, hi: f64) -> PaperExperiment {
    PaperExperiment {
        label: label.into(),
        n,
        strategy,
        paper_mean,
        lo,
        hi,
    }
}

pub fn paper_experiments() -> Vec<PaperExperiment> {
    let quadrant = StrategySpec::QuadrantUniform;
    let fractional = StrategySpec::Fractional {
        p: 0.35,
        inner: Box::new(StrategySpec::QuadrantUniform),
    };
    vec![
        experiment("n1000_greedy", 1000, StrategySpec::StraightLine, 7.0, 6.0, 8.0),
        experiment("n1000_sector60", 1000, StrategySpec::unbiased_sector(), 11.0, 9.5, 12.5),
        experiment("n1000_biased_sector", 1000, StrategySpec::biased_sector(), 15.0, 13.0, 17.0),
        experiment("n1000_quadrant", 1000, quadrant.clone(), 15.0, 13.0, 17.0),
        experiment("n1000_fractional", 1000, fractional.clone(), 40.0, 35.0, 46.0),
        experiment("n10000_greedy", 10_000, StrategySpec::StraightLine, 28.0, 25.0, 31.0),
        experiment("n10000_quadrant", 10_000, quadrant, 42.0, 37.0, 48.0),
        experiment("n10000_fractional", 10_000, fractional, 120.0, 105.0, 135.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionRow {
    pub label: String,
    pub n: u64,
    pub m: f64,
    pub strategy: String,
    pub paper_mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub simulated_mean: f64,
    pub stddev: f64,
    pub censored: u64,
    pub fallback_events: u64,
    /// `1 / (p beta M)`.
    pub analytic: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub seed: u64,
    pub trials: usize,
    pub small_range: f64,
    /// Range at which greedy forwarding averages the target hop count on
    /// 10000-node fields.
    pub large_range: f64,
    pub rows: Vec<ReproductionRow>,
    #[serde(skip)]
    pub histograms: Vec<(String, DelayHistogram)>,
}

impl Reproduction {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, label: &str) -> Option<&ReproductionRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,n,m,strategy,paper_mean,lo,hi,simulated_mean,stddev,censored,analytic,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},\"{}\",{},{},{},{},{},{},{},{}\n",
                r.label,
                r.n,
                fmt_float(r.m),
                r.strategy,
                fmt_float(r.paper_mean),
                fmt_float(r.lo),
                fmt_float(r.hi),
                fmt_float(r.simulated_mean),
                fmt_float(r.stddev),
                r.censored,
                fmt_float(r.analytic),
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Seed stream of one reproduction experiment.
pub fn experiment_stream(seed: u64, label: &str) -> SeedStream {
    SeedStream::new(seed, format!("reproduce/{label}"))
}

/// Runs the suite. Errors carry the label of the failing experiment.
pub fn reproduce_paper(seed: u64, trials: usize) -> Result<Reproduction> {
    let large_range = calibrate_range(10_000, LARGE_GREEDY_TARGET, CALIBRATION_TRIALS, seed)
        .map_err(|e| e.labeled("calibration n=10000"))?;
    let mut rows = Vec::new();
    let mut histograms = Vec::new();
    for ex in paper_experiments() {
        let m = if ex.n == 1000 { SMALL_RANGE } else { large_range };
        let summary = ScalingParams::with_range(ex.n, m)
            .and_then(|s| discrete_ensemble_with(&ex.strategy, &s, trials, &experiment_stream(seed, &ex.label), &DiscreteOptions::default()))
            .map_err(|e| e.labeled(ex.label.clone()))?;
        let h = summary.histogram;
        rows.push(ReproductionRow {
            label: ex.label.clone(),
            n: ex.n,
            m: round_sig9(m),
            strategy: ex.strategy.label(),
            paper_mean: ex.paper_mean,
            lo: ex.lo,
            hi: ex.hi,
            simulated_mean: h.mean,
            stddev: h.stddev,
            censored: h.censored,
            fallback_events: summary.fallback_events,
            analytic: round_sig9(1.0 / (closed_form_drift(&ex.strategy) * m)),
            pass: h.censored == 0 && h.mean >= ex.lo && h.mean <= ex.hi,
        });
        histograms.push((ex.label, h));
    }
    Ok(Reproduction {
        seed,
        trials,
        small_range: round_sig9(SMALL_RANGE),
        large_range: round_sig9(large_range),
        rows,
        histograms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let ex = paper_experiments();
        assert_eq!(ex.len(), 8);
        assert_eq!(ex.iter().filter(|e| e.n == 1000).count(), 5);
        for e in &ex {
            assert!(e.lo <= e.paper_mean && e.paper_mean <= e.hi);
            e.strategy.validate().unwrap();
        }
    }

    #[test]
    fn small_range_matches_constant() {
        // K = 1.717 at n = 1000 is the same range to three digits
        let k = SMALL_RANGE / (1000f64.ln() / 1000.0).sqrt();
        assert!((k - 1.717).abs() < 5e-3);
        let sector = 1.0 / (closed_form_drift(&StrategySpec::unbiased_sector()) * SMALL_RANGE);
        assert!((sector - 11.01).abs() < 0.05);
    }
}
