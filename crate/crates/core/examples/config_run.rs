//! Drives a command from a key=value config file, as the binary does.

use georoute::experiment::{parse_config, run};

fn main() -> georoute::Result<()> {
    let dir = std::env::temp_dir().join("georoute-config-example");
    std::fs::create_dir_all(&dir)?;
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# fractional walk\nstrategy = fractional\np = 0.35\ninner = quadrant\nn = 10000\nK = 1\ntrials = 200\n")?;
    let out = dir.join("out");
    let config = parse_config(["georoute", "simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])?;
    let manifest = run(&config)?;
    println!("wrote {:?} to {}", manifest.outputs, out.display());
    Ok(())
}
