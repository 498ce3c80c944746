//! Hop-count histograms with unit-width integer bins.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::{self, round_sig9, Format};

/// Distribution of routing delays over an ensemble of trials.
///
/// Bin `i` covers hop counts `[edges[i], edges[i + 1])`. Censored trials
/// (hop budget exhausted) are kept out of the bins and counted separately,
/// so `counts.sum() + censored == trials`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayHistogram {
    pub edges: Vec<u64>,
    pub counts: Vec<u64>,
    pub trials: u64,
    pub mean: f64,
    pub stddev: f64,
    pub censored: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl DelayHistogram {
    /// Builds a histogram from per-trial hop counts; `None` marks a censored
    /// trial.
    pub fn from_samples(samples: &[Option<u64>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("DelayHistogram", "need at least one trial"));
        }
        let mut tally = BTreeMap::new();
        let mut censored = 0;
        for s in samples {
            match s {
                Some(h) => *tally.entry(*h).or_insert(0u64) += 1,
                None => censored += 1,
            }
        }
        Ok(Self::from_tally(&tally, samples.len() as u64, censored))
    }

    fn from_tally(tally: &BTreeMap<u64, u64>, trials: u64, censored: u64) -> Self {
        let (edges, counts) = match (tally.keys().next(), tally.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                let edges: Vec<u64> = (lo..=hi + 1).collect();
                let counts = (lo..=hi).map(|h| tally.get(&h).copied().unwrap_or(0)).collect();
                (edges, counts)
            }
            _ => (Vec::new(), Vec::new()),
        };
        let n: u64 = tally.values().sum();
        let (mean, stddev) = if n == 0 {
            (0.0, 0.0)
        } else {
            let mean = tally.iter().map(|(&h, &c)| h as f64 * c as f64).sum::<f64>() / n as f64;
            let ss: f64 = tally
                .iter()
                .map(|(&h, &c)| c as f64 * (h as f64 - mean).powi(2))
                .sum();
            let var = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
            (mean, var.sqrt())
        };
        DelayHistogram {
            edges,
            counts,
            trials,
            mean: round_sig9(mean),
            stddev: round_sig9(stddev),
            censored,
            manifest: None,
        }
    }

    fn tally(&self) -> BTreeMap<u64, u64> {
        self.edges
            .iter()
            .zip(&self.counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&e, &c)| (e, c))
            .collect()
    }

    /// Combines two histograms. Order-independent.
    pub fn merge(&self, other: &DelayHistogram) -> DelayHistogram {
        let mut tally = self.tally();
        for (h, c) in other.tally() {
            *tally.entry(h).or_insert(0) += c;
        }
        Self::from_tally(&tally, self.trials + other.trials, self.censored + other.censored)
    }

    pub fn completed(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn with_manifest(mut self, name: impl Into<String>) -> Self {
        self.manifest = Some(name.into());
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_start,bin_end,count\n");
        for (w, c) in self.edges.windows(2).zip(&self.counts) {
            out.push_str(&format!("{},{},{}\n", w[0], w[1], c));
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        if self.trials == 0 {
            return Err(Error::domain("emit_histogram", "histogram has no trials"));
        }
        match format {
            Format::Json => output::to_json(self),
            Format::Csv => Ok(self.to_csv()),
        }
    }
}

/// Writes a histogram as JSON or CSV. Rejects empty histograms before
/// touching the file system.
pub fn emit_histogram(hist: &DelayHistogram, path: &Path, format: Format) -> Result<()> {
    let text = hist.render(format)?;
    output::write_text(path, &text)
}
