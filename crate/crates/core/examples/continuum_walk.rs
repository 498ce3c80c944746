//! One recorded walk plus an ensemble for the 60-degree sector.

use georoute::analytics::{beta_sector, predicted_delay};
use georoute::continuum::{run_ensemble, run_walk, WalkOptions};
use georoute::{ScalingParams, StrategySpec};

fn main() -> georoute::Result<()> {
    let scaling = ScalingParams::new(10_000, 1.0)?;
    let spec = StrategySpec::unbiased_sector();
    let walk = run_walk(&spec, &scaling, 3, &WalkOptions { record_trajectory: true, ..Default::default() })?;
    println!("M = {:.5}, eps = {:.5}", scaling.m, scaling.eps);
    println!("sample walk: tau = {:?}, total = {:?}", walk.tau, walk.total_hops);
    if let Some(hops) = &walk.hops {
        for h in hops.iter().take(5) {
            println!("  dist {:.4} -> progress {:+.5}", h.dist_before, h.progress);
        }
    }

    let summary = run_ensemble(&spec, &scaling, 500, 42)?;
    let beta = beta_sector(-std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_6)?;
    let bound = predicted_delay(&beta, 1.0, &scaling, None)?;
    println!(
        "ensemble: mean total {:.2} (sd {:.2}), prediction {:.2} in [{:.2}, {:.2}]",
        summary.total.mean, summary.total.stddev, bound.point_estimate, bound.lower_hops, bound.upper_hops
    );
    Ok(())
}
