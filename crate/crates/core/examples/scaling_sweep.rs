//! Normalized delay `M * E[tau]` approaching `1 / beta` as `n` grows.

use georoute::continuum::scaling_sweep;
use georoute::StrategySpec;

fn main() -> georoute::Result<()> {
    let table = scaling_sweep(&StrategySpec::QuadrantUniform, &[1_000, 10_000, 100_000, 1_000_000], 1.0, 100, 7)?;
    print!("{}", table.to_csv());
    println!("limit 1/beta = {:.4}", table.limit);
    Ok(())
}
