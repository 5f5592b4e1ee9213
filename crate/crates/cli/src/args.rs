use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

const COMMANDS: [&str; 6] = ["free-energy", "polymer", "lpp", "queue", "gue", "validate"];

const KEYS: [&str; 12] = [
    "beta",
    "m",
    "x",
    "n",
    "dt",
    "replicas",
    "horizon",
    "mc-samples",
    "seed",
    "out",
    "format",
    "suite",
];

#[derive(Parser, Debug)]
#[command(
    name = "polymer",
    version,
    about = "Free energy of the Brownian directed polymer, with simulation checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form free energy f(beta) over a beta range.
    #[command(args_override_self = true)]
    FreeEnergy(Params),
    /// Simulated (1/n) log Z_n(beta) against f(beta).
    #[command(args_override_self = true)]
    Polymer(Params),
    /// Simulated (1/n) L_n(n) for Brownian last-passage percolation.
    #[command(args_override_self = true)]
    Lpp(Params),
    /// Tandem queue lengths (1/n) sum r_k(0) against -digamma(m).
    #[command(args_override_self = true)]
    Queue(Params),
    /// Largest GUE eigenvalue against grid last-passage percolation.
    #[command(args_override_self = true)]
    Gue(Params),
    /// Run a validation suite and tabulate verdicts.
    #[command(args_override_self = true)]
    Validate(Params),
}

impl Command {
    pub fn params(&self) -> &Params {
        match self {
            Command::FreeEnergy(p)
            | Command::Polymer(p)
            | Command::Lpp(p)
            | Command::Queue(p)
            | Command::Gue(p)
            | Command::Validate(p) => p,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    /// Inverse temperature: a scalar or min:max:step.
    #[arg(long, value_parser = parse_range)]
    pub beta: Option<Range>,
    /// Queue drift m > 0: a scalar or min:max:step.
    #[arg(long, value_parser = parse_range)]
    pub m: Option<Range>,
    /// Kac x grid for the polymer validation suite: min:max:step with max < 0.
    #[arg(long, value_parser = parse_range)]
    pub x: Option<Range>,
    /// Number of paths or stages, or matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Lattice step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Independent environments (samples for `queue`).
    #[arg(long)]
    pub replicas: Option<usize>,
    /// Queue look-back horizon; defaults to a value chosen from m.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Monte Carlo samples for the moment identity check.
    #[arg(long = "mc-samples")]
    pub mc_samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Flat `key = value` file using flag names as keys. Flags given on the
    /// command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specialfn,
    Freeenergy,
    Environment,
    Polymer,
    Queue,
    Rmt,
    All,
}

/// Inclusive arithmetic range `min:max:step`; a scalar is a one-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    pub fn scalar(v: f64) -> Self {
        Range {
            min: v,
            max: v,
            step: 1.0,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.min == self.max {
            return vec![self.min];
        }
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| self.min + self.step * i as f64)
            .collect()
    }
}

const MAX_RANGE_POINTS: f64 = 1e6;

pub fn parse_range(s: &str) -> Result<Range, String> {
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| format!("`{t}` is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{t}` is not finite"))
        }
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Range::scalar(num(v)?)),
        [a, b, c] => {
            let (min, max, step) = (num(a)?, num(b)?, num(c)?);
            if max < min {
                return Err(format!("range {s}: max must be >= min"));
            }
            if min < max && !(step > 0.0) {
                return Err(format!("range {s}: step must be positive"));
            }
            if min < max && (max - min) / step > MAX_RANGE_POINTS {
                return Err(format!("range {s}: more than {MAX_RANGE_POINTS} points"));
            }
            Ok(Range { min, max, step })
        }
        _ => Err(format!("`{s}` is neither a number nor min:max:step")),
    }
}

fn parse_config(text: &str) -> Result<(Option<String>, Vec<OsString>), CliError> {
    let mut command = None;
    let mut flags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected `key = value`", i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "command" {
            if !COMMANDS.contains(&value) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown command `{value}`; expected one of {}",
                    i + 1,
                    COMMANDS.join(", ")
                )));
            }
            command = Some(value.to_string());
        } else if KEYS.contains(&key.as_str()) {
            flags.push(OsString::from(format!("--{key}")));
            flags.push(OsString::from(value));
        } else {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key `{key}`; expected command or one of {}",
                i + 1,
                KEYS.join(", ")
            )));
        }
    }
    Ok((command, flags))
}

/// Splices the contents of a `--config` file into the argument list, ahead of
/// the command-line flags so that those override it.
pub fn expand_config(raw: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strs: Vec<String> = raw
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let path = strs.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            strs.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(raw);
    };
    let text =
        fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("--config {path}: {e}")))?;
    let (file_command, file_flags) = parse_config(&text)?;
    let mut out = vec![raw[0].clone()];
    let rest = if strs.len() > 1 && COMMANDS.contains(&strs[1].as_str()) {
        out.push(raw[1].clone());
        &raw[2..]
    } else if let Some(c) = file_command {
        out.push(OsString::from(c));
        &raw[1..]
    } else {
        return Err(CliError::Usage(
            "no command given on the command line or as `command = ...` in the config file".into(),
        ));
    };
    out.extend(file_flags);
    out.extend(rest.iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:0:1").unwrap().values(), vec![0.0]);
        assert_eq!(parse_range("2.5").unwrap().values(), vec![2.5]);
        assert_eq!(
            parse_range("0:1:0.25").unwrap().values(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_range("-3.5:-0.5:0.02").unwrap().values().len(), 151);
        assert!(parse_range("1:0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("abc").is_err());
        assert!(parse_range("inf").is_err());
    }

    #[test]
    fn config_flags_come_before_command_line() {
        let (cmd, flags) =
            parse_config("command = polymer\n# note\nbeta = 2\nmc_samples = 10 # trailing\n")
                .unwrap();
        assert_eq!(cmd.as_deref(), Some("polymer"));
        let flags: Vec<String> = flags
            .iter()
            .map(|f| f.to_string_lossy().into_owned())
            .collect();
        assert_eq!(flags, ["--beta", "2", "--mc-samples", "10"]);
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("beta 1").is_err());
        assert!(parse_config("command = nope").is_err());
    }
}
