use std::process::ExitCode;

use clap::Parser;
use georoute::experiment::{run, Cli, ExperimentConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, raw) = cli.command.split();
    let result = ExperimentConfig::from_raw(command, raw).and_then(|config| run(&config));
    match result {
        Ok(manifest) => {
            eprintln!(
                "wrote {} files to {} in {:.1}s",
                manifest.outputs.len() + 1,
                manifest.config.out.display(),
                manifest.wall_clock_seconds
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
