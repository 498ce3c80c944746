//! Run manifests: everything needed to regenerate an output directory.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::output;
use crate::seed::SeedStream;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Per-trial seeds of one labeled stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub label: String,
    pub seeds: Vec<u64>,
}

/// Written next to the outputs of every run. JSON outputs point back to it
/// through their `manifest` field; CSV outputs are listed in `outputs`.
///
/// The wall-clock duration is kept out of the file so that identical runs
/// produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub seeds: Vec<SeedRecord>,
    pub outputs: Vec<String>,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.clone(),
            master_seed: config.seed,
            seeds: Vec::new(),
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    /// Records the first `count` seeds of `stream`.
    pub fn record(&mut self, stream: &SeedStream, count: usize) {
        self.seeds.push(SeedRecord {
            label: stream.label.clone(),
            seeds: (0..count as u64).map(|i| stream.trial_seed(i)).collect(),
        });
    }

    /// Writes `text` as `name` inside `dir` and lists it.
    pub fn emit(&mut self, dir: &Path, name: &str, text: &str) -> Result<()> {
        output::write_text(&dir.join(name), text)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        output::write_json(&dir.join(MANIFEST_FILE), self)
    }
}
