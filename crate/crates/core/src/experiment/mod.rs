//! Experiment configuration, runners and the reproduction suite behind the
//! `georoute` binary.

pub mod config;
pub mod manifest;
pub mod reproduce;
pub mod run;

pub use config::{parse_angle, parse_config, parse_config_file, Cli, Command, ExperimentConfig, Scale};
pub use manifest::{RunManifest, SeedRecord, MANIFEST_FILE};
pub use reproduce::{paper_experiments, reproduce_paper, Reproduction, ReproductionRow};
pub use run::{analysis, run, AnalysisReport};
