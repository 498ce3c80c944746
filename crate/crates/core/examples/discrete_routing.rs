//! Routing over an explicit node field. Writes the field and one path as
//! CSV into the directory given as the first argument (default `out`).

use std::path::PathBuf;

use georoute::discrete::{discrete_ensemble, generate_field_with_anchors, route_between, RouteOptions, DEFAULT_DST, DEFAULT_SRC};
use georoute::seed::rng_from_seed;
use georoute::{ScalingParams, StrategySpec};

fn main() -> georoute::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    std::fs::create_dir_all(&dir)?;
    let scaling = ScalingParams::with_range(1000, 1.0 / 7.0)?;
    let field = generate_field_with_anchors(&scaling, 9, false, &[DEFAULT_SRC, DEFAULT_DST])?;
    let spec = StrategySpec::QuadrantUniform;
    let path = route_between(&field, &spec, 0, 1, &RouteOptions::default(), &mut rng_from_seed(1))?;
    println!("quadrant path: {} hops, {} dead ends", path.hop_count, path.dead_end_events);
    std::fs::write(dir.join("field.csv"), field.to_csv())?;
    std::fs::write(dir.join("path.csv"), path.to_csv(&field))?;

    for spec in [StrategySpec::StraightLine, StrategySpec::unbiased_sector(), spec] {
        let h = discrete_ensemble(&spec, &scaling, 150, 4, true)?;
        println!("{:<24} mean {:>6.2}  sd {:>5.2}  censored {}", spec.label(), h.mean, h.stddev, h.censored);
    }
    Ok(())
}
