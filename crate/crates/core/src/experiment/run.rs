//! Command execution: each command writes its outputs and a manifest into
//! the configured directory.

use std::time::Instant;

use serde::Serialize;

use super::config::{Command, ExperimentConfig, Scale};
use super::manifest::{RunManifest, MANIFEST_FILE};
use super::reproduce::{experiment_stream, paper_experiments, reproduce_paper};
use crate::analytics::{
    beta_quadrant_adversarial, beta_quadrant_uniform, beta_sector, closed_form_drift, monte_carlo_drift, mu_bound,
    predicted_delay, triangular_array_check, BoundReport, DriftConstant,
};
use crate::capacity::run_capacity;
use crate::continuum::{run_ensemble_with, run_walk, scaling_sweep, WalkOptions};
use crate::discrete::{
    discrete_ensemble_with, generate_field_with_anchors, route_between, DiscreteOptions, RouteOptions,
    DEFAULT_DST, DEFAULT_SRC,
};
use crate::error::{Error, Result};
use crate::histogram::DelayHistogram;
use crate::output::{fmt_float, to_json, Format};
use crate::seed::SeedStream;
use crate::strategies::StrategySpec;

/// Runs the configured command. The returned manifest carries the
/// wall-clock duration.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(config);
    let label = match config.command {
        Command::Simulate => "simulate",
        Command::SimulateDiscrete => "simulate-discrete",
        Command::Analyze => "analyze",
        Command::Sweep => "sweep",
        Command::Capacity => "capacity",
        Command::ReproducePaper => "reproduce-paper",
    };
    let result = match config.command {
        Command::Simulate => simulate(config, &mut manifest),
        Command::SimulateDiscrete => simulate_discrete(config, &mut manifest),
        Command::Analyze => analyze(config, &mut manifest),
        Command::Sweep => sweep(config, &mut manifest),
        Command::Capacity => capacity(config, &mut manifest),
        Command::ReproducePaper => reproduce(config, &mut manifest),
    };
    result.map_err(|e| e.labeled(label))?;
    manifest.write(&config.out)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(manifest)
}

fn emit_hist(manifest: &mut RunManifest, config: &ExperimentConfig, stem: &str, h: DelayHistogram) -> Result<()> {
    let text = h.with_manifest(MANIFEST_FILE).render(config.format)?;
    manifest.emit(&config.out, &format!("{stem}.{}", config.format.extension()), &text)
}

/// JSON value with a back-reference to the manifest.
#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: &'static str,
}

fn emit_json<T: Serialize>(manifest: &mut RunManifest, config: &ExperimentConfig, name: &str, body: &T) -> Result<()> {
    let text = to_json(&WithManifest {
        body,
        manifest: MANIFEST_FILE,
    })?;
    manifest.emit(&config.out, name, &text)
}

fn simulate(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    let spec = config.strategy()?;
    let scaling = config.scaling()?;
    let stream = SeedStream::new(config.seed, format!("simulate/{}", spec.label()));
    manifest.record(&stream, config.trials);
    let summary = run_ensemble_with(spec, &scaling, config.trials, &stream, &WalkOptions::default())?;
    emit_hist(manifest, config, "tau_histogram", summary.tau)?;
    emit_hist(manifest, config, "total_histogram", summary.total)?;
    let sample = run_walk(
        spec,
        &scaling,
        stream.trial_seed(0),
        &WalkOptions {
            record_trajectory: true,
            ..Default::default()
        },
    )?;
    if let Some(csv) = sample.trajectory_csv() {
        manifest.emit(&config.out, "trajectory.csv", &csv)?;
    }
    Ok(())
}

fn simulate_discrete(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    let spec = config.strategy()?;
    let scaling = config.scaling()?;
    let stream = SeedStream::new(config.seed, format!("simulate-discrete/{}/{}", scaling.n, spec.label()));
    let fields = stream.child("field");
    let routes = stream.child("route");
    let field_count = if config.resample_field { config.trials } else { 1 };
    manifest.record(&fields, field_count);
    manifest.record(&routes, config.trials);
    let options = DiscreteOptions {
        resample_field: config.resample_field,
        ..Default::default()
    };
    let summary = discrete_ensemble_with(spec, &scaling, config.trials, &stream, &options)?;
    emit_hist(manifest, config, "histogram", summary.histogram.clone())?;
    emit_json(manifest, config, "summary.json", &summary)?;

    // sample path of trial 0 on its own field
    let field = generate_field_with_anchors(&scaling, fields.trial_seed(0), false, &[DEFAULT_SRC, DEFAULT_DST])?;
    manifest.emit(&config.out, "field.csv", &field.to_csv())?;
    let path = match route_between(&field, spec, 0, 1, &RouteOptions::default(), &mut routes.trial_rng(0)) {
        Ok(p) => p,
        Err(f) => f.partial,
    };
    manifest.emit(&config.out, "path.csv", &path.to_csv(&field))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub strategy: String,
    pub n: u64,
    pub k: f64,
    pub m: f64,
    /// Informed-hop probability (1 outside the fractional mixture).
    pub p: f64,
    /// Drift of the informed part.
    pub beta: f64,
    pub beta_quadrature: Option<DriftConstant>,
    pub beta_monte_carlo: DriftConstant,
    /// `p * beta`.
    pub effective_drift: f64,
    pub predicted: Option<BoundReport>,
    pub delta: f64,
    pub mu_bound: f64,
}

/// Drift constant of a non-mixture strategy by quadrature where one exists.
fn quadrature_drift(spec: &StrategySpec) -> Result<Option<DriftConstant>> {
    Ok(match spec {
        StrategySpec::Sector { phi1, phi2 } => Some(beta_sector(*phi1, *phi2)?),
        StrategySpec::QuadrantUniform => Some(beta_quadrant_uniform()),
        StrategySpec::QuadrantAdversarial => Some(beta_quadrant_adversarial()),
        StrategySpec::Fractional { inner, .. } => quadrature_drift(inner)?,
        StrategySpec::StraightLine | StrategySpec::RandomDisk => None,
    })
}

pub fn analysis(spec: &StrategySpec, config: &ExperimentConfig) -> Result<AnalysisReport> {
    let scaling = config.scaling()?;
    let (p, inner) = match spec {
        StrategySpec::Fractional { p, inner } => (*p, inner.as_ref()),
        other => (1.0, other),
    };
    let beta = closed_form_drift(inner);
    let exact = DriftConstant {
        value: beta,
        method: crate::analytics::DriftMethod::ClosedForm,
        abs_error_estimate: 0.0,
    };
    let predicted = match predicted_delay(&exact, p, &scaling, None) {
        Ok(b) => Some(b),
        Err(Error::NoDrift(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AnalysisReport {
        strategy: spec.label(),
        n: scaling.n,
        k: scaling.k,
        m: scaling.m,
        p,
        beta,
        beta_quadrature: quadrature_drift(spec)?,
        beta_monte_carlo: monte_carlo_drift(spec, 1_000_000, config.seed)?,
        effective_drift: p * beta,
        predicted,
        delta: config.delta,
        mu_bound: mu_bound(scaling.n, config.delta)?,
    })
}

fn analyze(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    let report = analysis(config.strategy()?, config)?;
    match config.format {
        Format::Json => emit_json(manifest, config, "analysis.json", &report),
        Format::Csv => {
            let mut csv = String::from("quantity,value\n");
            let mut row = |k: &str, v: f64| csv.push_str(&format!("{k},{}\n", fmt_float(v)));
            row("n", report.n as f64);
            row("K", report.k);
            row("M", report.m);
            row("p", report.p);
            row("beta", report.beta);
            row("beta_monte_carlo", report.beta_monte_carlo.value);
            row("effective_drift", report.effective_drift);
            if let Some(b) = report.predicted {
                row("predicted_hops", b.point_estimate);
                row("lower_hops", b.lower_hops);
                row("upper_hops", b.upper_hops);
            }
            row("delta", report.delta);
            row("mu_bound", report.mu_bound);
            manifest.emit(&config.out, "analysis.csv", &csv)
        }
    }
}

fn sweep(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    let spec = config.strategy()?;
    let k = match config.scale {
        Some(Scale::K(k)) => k,
        _ => return Err(Error::config("K", "sweep needs K")),
    };
    for &n in &config.n_list {
        manifest.record(&SeedStream::new(config.seed, format!("sweep/{}/{}", spec.label(), n)), config.trials);
    }
    let table = scaling_sweep(spec, &config.n_list, k, config.trials, config.seed)?;
    let conv = triangular_array_check(spec, &config.n_list, k, config.trials, config.threshold, config.seed)?;
    match config.format {
        Format::Json => {
            emit_json(manifest, config, "sweep.json", &table)?;
            emit_json(manifest, config, "concentration.json", &conv)
        }
        Format::Csv => {
            manifest.emit(&config.out, "sweep.csv", &table.to_csv())?;
            manifest.emit(&config.out, "concentration.csv", &conv.to_csv())
        }
    }
}

fn capacity(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    let scaling = config.scaling()?;
    let spec = config.strategy.clone().unwrap_or_else(StrategySpec::unbiased_sector);
    let run = run_capacity(&scaling, &spec, config.delta, config.guard, config.seed)?;
    emit_json(manifest, config, "tile_report.json", &run.report)?;
    manifest.emit(&config.out, "coloring.csv", &run.coloring.to_csv())
}

fn reproduce(config: &ExperimentConfig, manifest: &mut RunManifest) -> Result<()> {
    for ex in paper_experiments() {
        let stream = experiment_stream(config.seed, &ex.label);
        manifest.record(&stream.child("field"), config.trials);
        manifest.record(&stream.child("route"), config.trials);
    }
    let rep = reproduce_paper(config.seed, config.trials)?;
    for (label, h) in &rep.histograms {
        emit_hist(manifest, config, &format!("hist_{label}"), h.clone())?;
    }
    emit_json(manifest, config, "reproduction.json", &rep)?;
    manifest.emit(&config.out, "reproduction.csv", &rep.to_csv())
}
