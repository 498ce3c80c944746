//! Continuum walk: hops are drawn from a strategy's law with no node
//! positions, and the walk stops when it enters the destination ball.
//!
//! The walk state is the scalar distance to the destination; a planar pose is
//! tracked only for trajectory output. There is no boundary.

use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::closed_form_drift;
use crate::error::{Error, Result};
use crate::geometry::{exact_progress, transmission_range, Point2, PolarStep, ScalingParams};
use crate::histogram::DelayHistogram;
use crate::output::fmt_float;
use crate::seed::{rng_from_seed, SeedStream};
use crate::strategies::StrategySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    HitBall,
    HopBudgetExceeded,
}

/// One realised hop of a recorded walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopRecord {
    pub dist_before: f64,
    pub step: PolarStep,
    pub progress: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkResult {
    /// Hops needed to enter the destination ball; `None` when censored.
    pub tau: Option<u64>,
    /// `tau` plus the straight-line hops inside the ball, if counted.
    pub total_hops: Option<u64>,
    pub trajectory: Option<Vec<Point2>>,
    /// Per-hop detail for the random phase, recorded with the trajectory.
    pub hops: Option<Vec<HopRecord>>,
    pub terminated: Termination,
    /// Distance left when the walk stopped.
    pub remaining: f64,
}

impl WalkResult {
    pub fn is_censored(&self) -> bool {
        self.terminated == Termination::HopBudgetExceeded
    }

    /// Trajectory as CSV with header `hop,x,y`.
    pub fn trajectory_csv(&self) -> Option<String> {
        self.trajectory.as_ref().map(|pts| trajectory_csv(pts))
    }
}

pub fn trajectory_csv(points: &[Point2]) -> String {
    let mut out = String::from("hop,x,y\n");
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, fmt_float(p.x), fmt_float(p.y)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOptions {
    /// Maximum random-phase hops; `None` picks a budget from the drift.
    pub hop_budget: Option<u64>,
    pub record_trajectory: bool,
    /// Add the straight-line hops inside the destination ball.
    pub count_final_leg: bool,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions {
            hop_budget: None,
            record_trajectory: false,
            count_final_leg: true,
        }
    }
}

/// `50 / (p beta M)`, or `100 / M^2` for strategies without drift.
pub fn default_hop_budget(spec: &StrategySpec, m: f64) -> u64 {
    let drift = closed_form_drift(spec);
    let budget = if drift > 0.0 {
        50.0 / (drift * m)
    } else {
        100.0 / (m * m)
    };
    budget.ceil() as u64
}

/// Source position used for trajectory output; the destination sits at
/// distance `d` along the diagonal.
pub fn walk_endpoints(d: f64) -> (Point2, Point2) {
    (Point2::new(0.0, 0.0), Point2::new(d * FRAC_1_SQRT_2, d * FRAC_1_SQRT_2))
}

pub fn run_walk(
    spec: &StrategySpec,
    scaling: &ScalingParams,
    seed: u64,
    options: &WalkOptions,
) -> Result<WalkResult> {
    spec.validate()?;
    let m = scaling.m;
    let budget = options.hop_budget.unwrap_or_else(|| default_hop_budget(spec, m));
    if (budget as f64) < 1.0 / m {
        return Err(Error::domain(
            "run_walk",
            format!("hop budget {budget} is below 1/M = {:.1}", 1.0 / m),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let (src, dst) = walk_endpoints(scaling.d);
    let record = options.record_trajectory;
    let mut trajectory = record.then(|| vec![src]);
    let mut hops = record.then(Vec::new);
    let mut pos = src;
    let mut remaining = scaling.d;
    let mut tau = 0u64;

    while remaining > scaling.eps {
        if tau == budget {
            return Ok(WalkResult {
                tau: None,
                total_hops: None,
                trajectory,
                hops,
                terminated: Termination::HopBudgetExceeded,
                remaining,
            });
        }
        let step = spec.sample(m, &mut rng)?.step;
        let progress = exact_progress(remaining, step);
        if let Some(h) = hops.as_mut() {
            h.push(HopRecord {
                dist_before: remaining,
                step,
                progress,
            });
        }
        remaining = (remaining - progress).max(0.0);
        tau += 1;
        if let Some(t) = trajectory.as_mut() {
            pos = pos.offset(step.length, pos.bearing_to(dst) + step.angle);
            t.push(pos);
        }
    }

    let leg = if options.count_final_leg {
        (remaining / m).ceil() as u64
    } else {
        0
    };
    if let Some(t) = trajectory.as_mut() {
        for _ in 0..leg {
            let left = pos.distance(dst);
            pos = if left <= m {
                dst
            } else {
                pos.offset(m, pos.bearing_to(dst))
            };
            t.push(pos);
        }
    }
    Ok(WalkResult {
        tau: Some(tau),
        total_hops: Some(tau + leg),
        trajectory,
        hops,
        terminated: Termination::HitBall,
        remaining,
    })
}

/// Hop-count distributions over an ensemble of independent walks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    /// Total hops (including the in-ball leg when counted).
    pub total: DelayHistogram,
    /// Hitting time of the destination ball.
    pub tau: DelayHistogram,
}

pub fn run_ensemble_with(
    spec: &StrategySpec,
    scaling: &ScalingParams,
    trials: usize,
    seeds: &SeedStream,
    options: &WalkOptions,
) -> Result<EnsembleSummary> {
    if trials == 0 {
        return Err(Error::domain("run_ensemble", "trials must be positive"));
    }
    let mut opts = *options;
    opts.record_trajectory = false;
    let walks = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_walk(spec, scaling, seeds.trial_seed(t), &opts))
        .collect::<Result<Vec<_>>>()?;
    let totals: Vec<Option<u64>> = walks.iter().map(|w| w.total_hops).collect();
    let taus: Vec<Option<u64>> = walks.iter().map(|w| w.tau).collect();
    Ok(EnsembleSummary {
        total: DelayHistogram::from_samples(&totals)?,
        tau: DelayHistogram::from_samples(&taus)?,
    })
}

/// Ensemble with default options and a seed stream labeled by strategy.
pub fn run_ensemble(
    spec: &StrategySpec,
    scaling: &ScalingParams,
    trials: usize,
    master_seed: u64,
) -> Result<EnsembleSummary> {
    let seeds = SeedStream::new(master_seed, format!("continuum/{}", spec.label()));
    run_ensemble_with(spec, scaling, trials, &seeds, &WalkOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub m: f64,
    pub eps: f64,
    pub mean_tau: f64,
    /// `mean_tau * M`, which should approach `1 / beta`.
    pub normalized_delay: f64,
    /// Mean total hops (in-ball leg included) times `M`.
    pub normalized_total: f64,
    pub censored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub strategy: String,
    pub k: f64,
    pub trials: usize,
    /// `1 / beta` from the closed-form drift.
    pub limit: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,eps,mean_tau,normalized_delay,normalized_total,limit,censored\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                fmt_float(r.m),
                fmt_float(r.eps),
                fmt_float(r.mean_tau),
                fmt_float(r.normalized_delay),
                fmt_float(r.normalized_total),
                fmt_float(self.limit),
                r.censored
            ));
        }
        out
    }
}

/// Mean normalized hitting time `tau * M(n)` across a grid of `n`.
pub fn scaling_sweep(
    spec: &StrategySpec,
    n_list: &[u64],
    k: f64,
    trials: usize,
    master_seed: u64,
) -> Result<SweepTable> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("scaling_sweep", "n_list must be non-empty and ascending"));
    }
    let drift = closed_form_drift(spec);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        transmission_range(n, k)?;
        let scaling = ScalingParams::new(n, k)?;
        let seeds = SeedStream::new(master_seed, format!("sweep/{}/{}", spec.label(), n));
        let summary = run_ensemble_with(spec, &scaling, trials, &seeds, &WalkOptions::default())?;
        let mean_tau = summary.tau.mean;
        rows.push(SweepRow {
            n,
            m: scaling.m,
            eps: scaling.eps,
            mean_tau,
            normalized_delay: mean_tau * scaling.m,
            normalized_total: summary.total.mean * scaling.m,
            censored: summary.tau.censored,
        });
    }
    Ok(SweepTable {
        strategy: spec.label(),
        k,
        trials,
        limit: if drift > 0.0 { 1.0 / drift } else { f64::INFINITY },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::progress_bounds;

    fn small_scale() -> ScalingParams {
        ScalingParams::with_range(1000, 0.1427).unwrap()
    }

    #[test]
    fn straight_line_hop_counts() {
        let w = run_walk(&StrategySpec::StraightLine, &small_scale(), 0, &WalkOptions::default()).unwrap();
        assert_eq!(w.tau, Some(6));
        let total = w.total_hops.unwrap();
        assert!((6..=8).contains(&total), "{total}");
    }

    #[test]
    fn straight_line_has_no_spread() {
        let s = run_ensemble(&StrategySpec::StraightLine, &small_scale(), 150, 3).unwrap();
        assert_eq!(s.total.stddev, 0.0);
        assert_eq!(s.total.trials, 150);
    }

    #[test]
    fn trajectory_shape() {
        let opts = WalkOptions {
            record_trajectory: true,
            ..WalkOptions::default()
        };
        let scaling = small_scale();
        for spec in [
            StrategySpec::unbiased_sector(),
            StrategySpec::fractional(0.35, StrategySpec::QuadrantUniform).unwrap(),
        ] {
            let w = run_walk(&spec, &scaling, 11, &opts).unwrap();
            let traj = w.trajectory.as_ref().unwrap();
            assert_eq!(traj.len() as u64, w.total_hops.unwrap() + 1);
            for pair in traj.windows(2) {
                assert!(pair[0].distance(pair[1]) <= scaling.m + 1e-12);
            }
            let tau = w.tau.unwrap();
            let total = w.total_hops.unwrap();
            assert!(tau <= total && total <= tau + (scaling.eps / scaling.m).ceil() as u64);
            let csv = w.trajectory_csv().unwrap();
            assert!(csv.starts_with("hop,x,y\n"));
            assert_eq!(csv.lines().count(), traj.len() + 1);
        }
    }

    #[test]
    fn hitting_time_is_first_passage() {
        let opts = WalkOptions {
            record_trajectory: true,
            ..WalkOptions::default()
        };
        let scaling = small_scale();
        for seed in 0..50 {
            let w = run_walk(&StrategySpec::QuadrantUniform, &scaling, seed, &opts).unwrap();
            let hops = w.hops.unwrap();
            let target = scaling.d - scaling.eps;
            let mut cumulative = 0.0;
            for (i, h) in hops.iter().enumerate() {
                let before = cumulative;
                cumulative += h.progress;
                if i + 1 < hops.len() {
                    assert!(cumulative < target + 1e-12);
                } else {
                    assert!(before < target + 1e-12 && cumulative >= target - 1e-12);
                }
            }
        }
    }

    #[test]
    fn per_hop_sandwich() {
        let opts = WalkOptions {
            record_trajectory: true,
            ..WalkOptions::default()
        };
        let scaling = ScalingParams::new(100_000, 1.5).unwrap();
        for spec in [StrategySpec::unbiased_sector(), StrategySpec::QuadrantAdversarial] {
            let w = run_walk(&spec, &scaling, 5, &opts).unwrap();
            for h in w.hops.unwrap() {
                if h.dist_before > scaling.m + scaling.eps {
                    let (lo, hi) = progress_bounds(h.step, scaling.eps).unwrap();
                    assert!(lo <= h.progress && h.progress <= hi, "{h:?}");
                }
            }
        }
    }

    #[test]
    fn censoring_is_monotone() {
        let scaling = small_scale();
        let spec = StrategySpec::fractional(0.35, StrategySpec::QuadrantUniform).unwrap();
        let budget = (1.0 / scaling.m).ceil() as u64;
        for seed in 0..40 {
            let short = run_walk(&spec, &scaling, seed, &WalkOptions {
                hop_budget: Some(budget * 3),
                ..WalkOptions::default()
            })
            .unwrap();
            let long = run_walk(&spec, &scaling, seed, &WalkOptions {
                hop_budget: Some(budget * 30),
                ..WalkOptions::default()
            })
            .unwrap();
            if !short.is_censored() {
                assert_eq!(short, long);
            }
        }
    }

    #[test]
    fn budget_below_one_over_range_is_rejected() {
        let err = run_walk(&StrategySpec::StraightLine, &small_scale(), 0, &WalkOptions {
            hop_budget: Some(3),
            ..WalkOptions::default()
        });
        assert!(err.is_err());
    }

    #[test]
    fn censored_walks_are_counted() {
        let s = run_ensemble_with(
            &StrategySpec::RandomDisk,
            &small_scale(),
            20,
            &SeedStream::new(1, "diffusive"),
            &WalkOptions {
                hop_budget: Some(8),
                ..WalkOptions::default()
            },
        )
        .unwrap();
        assert!(s.total.censored > 0);
        assert_eq!(s.total.completed() + s.total.censored, 20);
    }

    #[test]
    fn ensembles_are_reproducible() {
        let spec = StrategySpec::QuadrantUniform;
        let a = run_ensemble(&spec, &small_scale(), 64, 42).unwrap();
        let b = run_ensemble(&spec, &small_scale(), 64, 42).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn straight_line_sweep_is_flat() {
        let t = scaling_sweep(&StrategySpec::StraightLine, &[1_000, 10_000, 100_000], 1.5, 4, 1).unwrap();
        for r in &t.rows {
            // tau * M covers d - eps up to one hop of quantization
            let covered = 1.0 - r.eps;
            assert!(r.normalized_delay >= covered - 1e-12 && r.normalized_delay < covered + r.m + 1e-12);
            assert!(r.normalized_total >= 1.0 && r.normalized_total < 1.0 + r.m);
        }
    }
}
