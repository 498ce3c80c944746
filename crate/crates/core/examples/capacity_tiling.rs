//! Tiling, interference coloring and per-tile congestion for n/2 random
//! flows on a torus.

use georoute::capacity::{run_capacity, DEFAULT_CAPACITY_K};
use georoute::{ScalingParams, StrategySpec};

fn main() -> georoute::Result<()> {
    for n in [4_000, 10_000] {
        let scaling = ScalingParams::new(n, DEFAULT_CAPACITY_K)?;
        let run = run_capacity(&scaling, &StrategySpec::unbiased_sector(), 0.5, 0.5, 1)?;
        let r = &run.report;
        println!(
            "n {n}: {} tiles, {} colors (J = {}), max tile hops {}, mu {:.1}, rate {:.3e} vs target {:.3e}, failed {}",
            r.tiles, r.colors_used, r.j, r.max_tile_hops, r.mu_bound, r.achieved_rate, r.target_rate, r.failed_flows
        );
    }
    Ok(())
}
