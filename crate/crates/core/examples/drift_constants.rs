//! Expected per-hop progress of every strategy, three ways.

use georoute::analytics::{beta_quadrant_adversarial, beta_quadrant_uniform, beta_sector, closed_form_drift, monte_carlo_drift};
use georoute::StrategySpec;

fn main() -> georoute::Result<()> {
    let specs = [
        StrategySpec::StraightLine,
        StrategySpec::unbiased_sector(),
        StrategySpec::biased_sector(),
        StrategySpec::QuadrantUniform,
        StrategySpec::QuadrantAdversarial,
        StrategySpec::RandomDisk,
        StrategySpec::fractional(0.35, StrategySpec::QuadrantUniform)?,
    ];
    println!("{:<34} {:>10} {:>10} {:>10}", "strategy", "closed", "quadrature", "mc(1e6)");
    for spec in &specs {
        let quad = match spec {
            StrategySpec::Sector { phi1, phi2 } => Some(beta_sector(*phi1, *phi2)?.value),
            StrategySpec::QuadrantUniform => Some(beta_quadrant_uniform().value),
            StrategySpec::QuadrantAdversarial => Some(beta_quadrant_adversarial().value),
            _ => None,
        };
        let mc = monte_carlo_drift(spec, 1_000_000, 1)?;
        println!(
            "{:<34} {:>10.6} {:>10} {:>10.6}",
            spec.label(),
            closed_form_drift(spec),
            quad.map(|q| format!("{q:.6}")).unwrap_or_else(|| "-".into()),
            mc.value
        );
    }
    Ok(())
}
