//! Scaled projection sums concentrating on the drift as `n` grows.

use georoute::analytics::triangular_array_check;
use georoute::StrategySpec;

fn main() -> georoute::Result<()> {
    let table = triangular_array_check(&StrategySpec::unbiased_sector(), &[10_000, 100_000, 1_000_000], 1.0, 1000, 0.05, 3)?;
    print!("{}", table.to_csv());
    println!("slope of ln|dev| vs ln M: {:.3} (0.5 expected)", table.deviation_slope());
    Ok(())
}
