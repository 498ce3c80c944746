//! Command-line and config-file parsing into a validated [`ExperimentConfig`].
//!
//! Every option can come from a flag or from a flat `key = value` file given
//! by `--config`; flags win. Values are parsed here rather than by clap so
//! that each failure names the offending field.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::capacity::DEFAULT_CAPACITY_K;
use crate::error::{Error, Result};
use crate::geometry::ScalingParams;
use crate::output::Format;
use crate::strategies::StrategySpec;

#[derive(Debug, Parser)]
#[command(name = "georoute", version, about = "Geographic routing delay and capacity experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Continuum random-walk ensemble
    Simulate(RawArgs),
    /// Node-level routing ensemble
    SimulateDiscrete(RawArgs),
    /// Drift constants and predicted delays
    Analyze(RawArgs),
    /// Normalized delay across a grid of n, plus the concentration check
    Sweep(RawArgs),
    /// Tiling, coloring and congestion under progressive routing
    Capacity(RawArgs),
    /// The eight node-level experiments with a comparison table
    ReproducePaper(RawArgs),
}

/// Unvalidated options shared by all subcommands.
#[derive(Debug, Default, Clone, Args)]
pub struct RawArgs {
    /// Flat `key = value` file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// straight_line | sector | quadrant_uniform | quadrant_adversarial | fractional | random_disk
    #[arg(long, alias = "kind")]
    pub strategy: Option<String>,
    /// Sector bounds, radians or with a `deg` suffix
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<String>,
    /// Probability of an informed hop (fractional)
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Informed strategy of the fractional mixture
    #[arg(long)]
    pub inner: Option<String>,
    #[arg(long = "n", alias = "N", allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Range constant in M = K sqrt(ln n / n)
    #[arg(long = "K", alias = "k", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Transmission range given directly
    #[arg(long = "M", alias = "m", allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Source to destination distance (continuum)
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub trials: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    /// Progress fraction of the capacity flows
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Protocol-model guard
    #[arg(long = "Delta", alias = "guard", allow_hyphen_values = true)]
    pub guard: Option<String>,
    /// Comma-separated n grid for `sweep`
    #[arg(long = "n-list")]
    pub n_list: Option<String>,
    /// Deviation threshold of the concentration check
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<String>,
    /// true: new node field every trial
    #[arg(long = "resample-field")]
    pub resample_field: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    /// json | csv
    #[arg(long)]
    pub format: Option<String>,
}

const KEYS: &[&str] = &[
    "strategy", "kind", "phi1", "phi2", "p", "inner", "n", "N", "K", "k", "M", "m", "d", "trials", "seed", "delta",
    "Delta", "guard", "n_list", "n-list", "threshold", "resample_field", "resample-field", "out", "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    SimulateDiscrete,
    Analyze,
    Sweep,
    Capacity,
    ReproducePaper,
}

/// Either the range constant or the range itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scale {
    K(f64),
    M(f64),
}

impl Scale {
    pub fn scaling(self, n: u64) -> Result<ScalingParams> {
        match self {
            Scale::K(k) => ScalingParams::new(n, k),
            Scale::M(m) => ScalingParams::with_range(n, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub strategy: Option<StrategySpec>,
    pub n: Option<u64>,
    pub scale: Option<Scale>,
    pub d: f64,
    pub trials: usize,
    pub seed: u64,
    pub delta: f64,
    pub guard: f64,
    pub n_list: Vec<u64>,
    pub threshold: f64,
    pub resample_field: bool,
    pub out: PathBuf,
    pub format: Format,
}

impl ExperimentConfig {
    /// Scaling for `n` and the configured scale, at distance `d`.
    pub fn scaling(&self) -> Result<ScalingParams> {
        let n = self.n.ok_or_else(|| Error::config("n", "required"))?;
        let scale = self.scale.ok_or_else(|| Error::config("K", "one of K or M is required"))?;
        scale.scaling(n)?.with_distance(self.d)
    }

    pub fn strategy(&self) -> Result<&StrategySpec> {
        self.strategy.as_ref().ok_or_else(|| Error::config("strategy", "required"))
    }
}

/// Parses `30deg`, `-0.5rad` or a bare number of radians.
pub fn parse_angle(field: &str, text: &str) -> Result<f64> {
    let t = text.trim();
    let (num, degrees) = if let Some(v) = t.strip_suffix("deg") {
        (v, true)
    } else if let Some(v) = t.strip_suffix("rad") {
        (v, false)
    } else {
        (t, false)
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::config(field, format!("expected an angle such as 30deg or 0.52, got {text:?}")))?;
    if !v.is_finite() {
        return Err(Error::config(field, format!("angle must be finite, got {text:?}")));
    }
    Ok(if degrees { v.to_radians() } else { v })
}

/// Reads a flat `key = value` file. Blank lines and `#` comments are
/// skipped; unknown keys are errors.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config("config", format!("line {}: expected key = value", i + 1)));
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::config(key, format!("unknown key on line {}", i + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn canonical(key: &str) -> &str {
    match key {
        "kind" => "strategy",
        "N" => "n",
        "k" => "K",
        "m" => "M",
        "guard" => "Delta",
        "n-list" => "n_list",
        "resample-field" => "resample_field",
        k => k,
    }
}

struct Fields(BTreeMap<&'static str, String>);

impl Fields {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| Error::config(key, format!("cannot parse {v:?}")))
            })
            .transpose()
    }

    fn positive(&self, key: &str) -> Result<Option<f64>> {
        match self.num::<f64>(key)? {
            Some(v) if !(v > 0.0 && v.is_finite()) => Err(Error::config(key, format!("must be positive, got {v}"))),
            v => Ok(v),
        }
    }
}

fn merge(raw: &RawArgs) -> Result<Fields> {
    let mut fields: BTreeMap<&'static str, String> = BTreeMap::new();
    if let Some(path) = &raw.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        for (k, v) in parse_config_file(&text)? {
            let key = KEYS.iter().find(|&&s| s == canonical(&k)).copied().unwrap_or("strategy");
            fields.insert(key, v);
        }
    }
    let flags: [(&'static str, &Option<String>); 19] = [
        ("strategy", &raw.strategy),
        ("phi1", &raw.phi1),
        ("phi2", &raw.phi2),
        ("p", &raw.p),
        ("inner", &raw.inner),
        ("n", &raw.n),
        ("K", &raw.k),
        ("M", &raw.m),
        ("d", &raw.d),
        ("trials", &raw.trials),
        ("seed", &raw.seed),
        ("delta", &raw.delta),
        ("Delta", &raw.guard),
        ("n_list", &raw.n_list),
        ("threshold", &raw.threshold),
        ("resample_field", &raw.resample_field),
        ("out", &raw.out),
        ("format", &raw.format),
        ("config", &None),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            fields.insert(key, v.clone());
        }
    }
    Ok(Fields(fields))
}

fn parse_kind(field: &str, text: &str) -> Result<&'static str> {
    Ok(match text.trim().to_ascii_lowercase().replace('-', "_").as_str() {
        "straight_line" | "greedy" => "straight_line",
        "sector" => "sector",
        "quadrant_uniform" | "quadrant" => "quadrant_uniform",
        "quadrant_adversarial" => "quadrant_adversarial",
        "fractional" => "fractional",
        "random_disk" => "random_disk",
        _ => {
            return Err(Error::config(
                field,
                format!(
                    "unknown strategy kind {text:?}; expected straight_line, sector, quadrant_uniform, \
                     quadrant_adversarial, fractional or random_disk"
                ),
            ))
        }
    })
}

fn build_simple(kind: &str, f: &Fields) -> Result<StrategySpec> {
    Ok(match kind {
        "straight_line" => StrategySpec::StraightLine,
        "quadrant_uniform" => StrategySpec::QuadrantUniform,
        "quadrant_adversarial" => StrategySpec::QuadrantAdversarial,
        "random_disk" => StrategySpec::RandomDisk,
        "sector" => {
            let phi1 = f.get("phi1").map(|v| parse_angle("phi1", v)).transpose()?;
            let phi2 = f.get("phi2").map(|v| parse_angle("phi2", v)).transpose()?;
            let (phi1, phi2) = match (phi1, phi2) {
                (None, None) => (-30f64.to_radians(), 30f64.to_radians()),
                (Some(a), Some(b)) => (a, b),
                (None, Some(_)) => return Err(Error::config("phi1", "required when phi2 is given")),
                (Some(_), None) => return Err(Error::config("phi2", "required when phi1 is given")),
            };
            let pi = std::f64::consts::PI;
            for (name, v) in [("phi1", phi1), ("phi2", phi2)] {
                if !(-pi..=pi).contains(&v) {
                    return Err(Error::config(name, format!("must lie in [-pi, pi], got {v}")));
                }
            }
            if phi1 >= phi2 {
                return Err(Error::config("phi1", format!("must be less than phi2 (got {phi1} >= {phi2})")));
            }
            let spec = StrategySpec::Sector { phi1, phi2 };
            spec.validate()
                .map_err(|e| Error::config("phi2", e.to_string()))?;
            spec
        }
        "fractional" => return Err(Error::config("inner", "a fractional strategy cannot be nested")),
        _ => unreachable!("kind already checked"),
    })
}

fn build_strategy(f: &Fields) -> Result<Option<StrategySpec>> {
    let Some(kind) = f.get("strategy") else {
        return Ok(None);
    };
    let kind = parse_kind("strategy", kind)?;
    if kind != "fractional" {
        return build_simple(kind, f).map(Some);
    }
    let p: f64 = f.num("p")?.ok_or_else(|| Error::config("p", "required for the fractional strategy"))?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::config("p", format!("must lie in (0, 1), got {p}")));
    }
    let inner_kind = parse_kind("inner", f.get("inner").unwrap_or("quadrant_uniform"))?;
    let inner = build_simple(inner_kind, f)?;
    Ok(Some(StrategySpec::Fractional {
        p,
        inner: Box::new(inner),
    }))
}

fn parse_bool(field: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(field, format!("expected true or false, got {v:?}"))),
    }
}

impl ExperimentConfig {
    /// Validates raw options for `command`.
    pub fn from_raw(command: Command, raw: &RawArgs) -> Result<Self> {
        let f = merge(raw)?;
        let strategy = build_strategy(&f)?;
        let n: Option<u64> = f.num("n")?;
        if let Some(n) = n {
            if n < 2 {
                return Err(Error::config("n", format!("must be at least 2, got {n}")));
            }
        }
        let k = f.positive("K")?;
        let m = f.positive("M")?;
        let scale = match (k, m) {
            (Some(_), Some(_)) => return Err(Error::config("K", "give either K or M, not both")),
            (Some(k), None) => Some(Scale::K(k)),
            (None, Some(m)) => Some(Scale::M(m)),
            (None, None) if command == Command::Capacity => Some(Scale::K(DEFAULT_CAPACITY_K)),
            (None, None) => None,
        };
        let default_trials = match command {
            Command::Sweep => 100,
            _ => 150,
        };
        let trials = f.num::<usize>("trials")?.unwrap_or(default_trials);
        if trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        let delta = f.num::<f64>("delta")?.unwrap_or(0.5);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::config("delta", format!("must lie in (0, 1), got {delta}")));
        }
        let guard = f.num::<f64>("Delta")?.unwrap_or(0.5);
        if !(guard >= 0.0 && guard.is_finite()) {
            return Err(Error::config("Delta", format!("must be non-negative, got {guard}")));
        }
        let n_list = match f.get("n_list") {
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::config("n_list", format!("cannot parse {s:?}")))
                })
                .collect::<Result<Vec<u64>>>()?,
            None => vec![1_000, 10_000, 100_000, 1_000_000],
        };
        if n_list.len() < 3 || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] < 2 {
            return Err(Error::config("n_list", "need at least three strictly ascending values >= 2"));
        }
        let format = match f.get("format") {
            Some(v) => Format::parse(v).ok_or_else(|| Error::config("format", format!("expected json or csv, got {v:?}")))?,
            None => Format::Json,
        };
        let config = ExperimentConfig {
            command,
            strategy,
            n,
            scale,
            d: f.positive("d")?.unwrap_or(1.0),
            trials,
            seed: f.num("seed")?.unwrap_or(0),
            delta,
            guard,
            n_list,
            threshold: f.positive("threshold")?.unwrap_or(0.05),
            resample_field: f.get("resample_field").map(|v| parse_bool("resample_field", v)).transpose()?.unwrap_or(true),
            out: PathBuf::from(f.get("out").unwrap_or("out")),
            format,
        };
        config.check_required()?;
        Ok(config)
    }

    fn check_required(&self) -> Result<()> {
        let needs_strategy = matches!(
            self.command,
            Command::Simulate | Command::SimulateDiscrete | Command::Analyze | Command::Sweep
        );
        if needs_strategy && self.strategy.is_none() {
            return Err(Error::config("strategy", "required for this command"));
        }
        let needs_scale = matches!(
            self.command,
            Command::Simulate | Command::SimulateDiscrete | Command::Analyze | Command::Capacity
        );
        if needs_scale {
            if self.n.is_none() {
                return Err(Error::config("n", "required for this command"));
            }
            if self.scale.is_none() {
                return Err(Error::config("K", "one of K or M is required"));
            }
            // surfaces range problems (M >= d, ball too large) as config errors
            self.scaling().map_err(|e| Error::config("n", e.to_string()))?;
        }
        if self.command == Command::Sweep && matches!(self.scale, Some(Scale::M(_))) {
            return Err(Error::config("M", "sweep varies n and needs K"));
        }
        Ok(())
    }
}

impl CommandArgs {
    pub fn split(&self) -> (Command, &RawArgs) {
        match self {
            CommandArgs::Simulate(a) => (Command::Simulate, a),
            CommandArgs::SimulateDiscrete(a) => (Command::SimulateDiscrete, a),
            CommandArgs::Analyze(a) => (Command::Analyze, a),
            CommandArgs::Sweep(a) => (Command::Sweep, a),
            CommandArgs::Capacity(a) => (Command::Capacity, a),
            CommandArgs::ReproducePaper(a) => (Command::ReproducePaper, a),
        }
    }
}

/// Parses a full argument vector (program name first). Usage errors from
/// clap are reported as config errors on the field `args`.
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::config("args", e.to_string()))?;
    let (command, raw) = cli.command.split();
    ExperimentConfig::from_raw(command, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn parse(line: &str) -> Result<ExperimentConfig> {
        parse_config(std::iter::once("georoute").chain(line.split_whitespace()))
    }

    fn field_of(e: Error) -> String {
        match e {
            Error::Config { field, .. } => field,
            other => panic!("not a config error: {other}"),
        }
    }

    #[test]
    fn happy_path() {
        let c = parse("simulate --strategy sector --phi1 -30deg --phi2 30deg --n 1000 --K 1.717 --trials 150 --seed 7")
            .unwrap();
        assert_eq!(c.command, Command::Simulate);
        assert_eq!(c.n, Some(1000));
        assert_eq!(c.scale, Some(Scale::K(1.717)));
        assert_eq!(c.trials, 150);
        assert_eq!(c.seed, 7);
        match c.strategy.unwrap() {
            StrategySpec::Sector { phi1, phi2 } => {
                assert!((phi1 + PI / 6.0).abs() < 1e-15 && (phi2 - PI / 6.0).abs() < 1e-15)
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn degree_suffix() {
        assert!((parse_angle("phi2", "30deg").unwrap() - 0.523_599).abs() < 1e-6);
        assert_eq!(parse_angle("phi1", "0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("phi1", "-1rad").unwrap(), -1.0);
        assert_eq!(field_of(parse_angle("phi1", "thirty").unwrap_err()), "phi1");
    }

    #[test]
    fn structured_errors() {
        let e = parse("simulate --strategy fractional --p 1.5 --n 1000 --K 1.7").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("(0, 1)"));
        assert_eq!(field_of(e), "p");
        let e = parse("simulate --strategy sector --phi1 30deg --phi2 -30deg --n 1000 --K 1.7").unwrap_err();
        assert_eq!(field_of(e), "phi1");
        let e = parse("simulate --strategy zigzag --n 1000 --K 1.7").unwrap_err();
        assert_eq!(field_of(e), "strategy");
        let e = parse("simulate --strategy greedy --n 1000 --K 1.7 --M 0.1").unwrap_err();
        assert_eq!(field_of(e), "K");
        let e = parse("simulate --strategy greedy --n 1000").unwrap_err();
        assert_eq!(field_of(e), "K");
        let e = parse("simulate --strategy greedy --n 1000 --K 1.7 --trials 0").unwrap_err();
        assert_eq!(field_of(e), "trials");
        let e = parse("simulate --strategy fractional --p 0.3 --inner fractional --n 1000 --K 1.7").unwrap_err();
        assert_eq!(field_of(e), "inner");
        let e = parse("simulate --bogus 1").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn config_file_with_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(
            &path,
            "# node-level run\nstrategy = fractional\np = 0.35\ninner = quadrant\nN = 1000\nM = 0.142857\ntrials = 20\nseed = 3\n",
        )
        .unwrap();
        let line = format!("simulate-discrete --config {} --seed 11", path.display());
        let c = parse(&line).unwrap();
        assert_eq!(c.seed, 11);
        assert_eq!(c.trials, 20);
        assert_eq!(c.scale, Some(Scale::M(0.142857)));
        assert_eq!(c.strategy, Some(StrategySpec::fractional(0.35, StrategySpec::QuadrantUniform).unwrap()));

        fs::write(&path, "colour = red\n").unwrap();
        assert_eq!(field_of(parse(&format!("analyze --config {}", path.display())).unwrap_err()), "colour");
    }

    #[test]
    fn command_defaults() {
        let c = parse("capacity --n 10000").unwrap();
        assert_eq!(c.scale, Some(Scale::K(DEFAULT_CAPACITY_K)));
        assert_eq!((c.delta, c.guard), (0.5, 0.5));
        let c = parse("reproduce-paper --seed 4").unwrap();
        assert_eq!(c.seed, 4);
        let e = parse("sweep --strategy greedy --M 0.1").unwrap_err();
        assert_eq!(field_of(e), "M");
        let e = parse("sweep --strategy greedy --K 1 --n-list 1000,100").unwrap_err();
        assert_eq!(field_of(e), "n_list");
    }
}
