//! Run configuration assembled from command-line flags and an optional
//! TOML file, with per-command defaults.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use cardinal_core::scalars;
use cardinal_core::splines::MAX_DEGREE;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Condition numbers of T_n^d for small degrees with Gershgorin bounds.
    Table31,
    /// Condition numbers of T_n^d and its periodization C_m^d, and 1/λ_∞.
    Table51,
    /// Full periodization spectrum (k, λ_k) for each (d, n).
    Figure51,
    /// κ₂(T_n^d), κ₂(C_m^d) and 1/λ_∞^d over a range of n.
    Figure52,
    /// Audit the location of the minimal periodization eigenvalue.
    Scan,
    /// λ_∞^d from the symbol and from tangent/Euler numbers.
    LambdaInf,
    /// Circulant embedding sizes and guarantees.
    EmbedPlan,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Table31 => "table31",
            Command::Table51 => "table51",
            Command::Figure51 => "figure51",
            Command::Figure52 => "figure52",
            Command::Scan => "scan",
            Command::LambdaInf => "lambda-inf",
            Command::EmbedPlan => "embed-plan",
        }
    }

    pub fn default_degrees(self) -> Vec<u32> {
        match self {
            Command::Table31 => (2..=6).collect(),
            Command::Table51 => vec![2, 5, 6, 9, 21, 30],
            Command::Figure51 => vec![7],
            Command::Figure52 => vec![9],
            Command::Scan => (2..=30).collect(),
            Command::LambdaInf => (1..=30).collect(),
            Command::EmbedPlan => vec![2, 5, 9],
        }
    }

    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Command::Table31 | Command::Table51 => vec![64, 128, 256, 512, 1024, 2048],
            Command::Figure51 => vec![23, 24],
            Command::Figure52 => (1..=32).map(|k| 16 * k).collect(),
            Command::Scan | Command::LambdaInf => Vec::new(),
            Command::EmbedPlan => vec![64],
        }
    }

    /// Whether the command iterates over explicit sizes `n`.
    pub fn uses_sizes(self) -> bool {
        !matches!(self, Command::LambdaInf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Text,
}

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = scalars::DEFAULT_PRECISION;
/// Default largest circulant order covered by `scan`.
pub const DEFAULT_MAX_ORDER: usize = 512;

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub degrees: Vec<u32>,
    /// Knot counts `n`; empty for `scan` means every `n` whose periodization
    /// order lies in `2r+1..=max_order`.
    pub sizes: Vec<usize>,
    pub precision: u32,
    pub output_format: OutputFormat,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    /// Worker threads; 0 selects the number of available cores.
    #[serde(skip)]
    pub jobs: usize,
    pub oracle: bool,
    pub max_order: usize,
}

/// Optional settings as read from a TOML file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub degrees: Option<Vec<u32>>,
    pub sizes: Option<Vec<usize>>,
    pub precision: Option<u32>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub oracle: Option<bool>,
    pub max_order: Option<usize>,
}

impl Overrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Values set here take precedence over those in `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            degrees: self.degrees.or(base.degrees),
            sizes: self.sizes.or(base.sizes),
            precision: self.precision.or(base.precision),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            jobs: self.jobs.or(base.jobs),
            oracle: self.oracle.or(base.oracle),
            max_order: self.max_order.or(base.max_order),
        }
    }
}

impl RunConfig {
    pub fn resolve(command: Command, o: Overrides) -> Result<Self> {
        let config = RunConfig {
            command,
            degrees: o.degrees.unwrap_or_else(|| command.default_degrees()),
            sizes: o.sizes.unwrap_or_else(|| command.default_sizes()),
            precision: o.precision.unwrap_or(DEFAULT_PRECISION),
            output_format: o.format.unwrap_or_default(),
            output_path: o.out,
            jobs: o.jobs.unwrap_or(0),
            oracle: o.oracle.unwrap_or(false),
            max_order: o.max_order.unwrap_or(DEFAULT_MAX_ORDER),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.degrees.is_empty() {
            return fail("at least one degree is required".into());
        }
        if let Some(d) = self.degrees.iter().find(|&&d| d == 0 || d > MAX_DEGREE) {
            return fail(format!("degree {d} outside 1..={MAX_DEGREE}"));
        }
        if self.precision < scalars::MIN_PRECISION {
            return fail(format!("precision {} below the minimum of {} bits", self.precision, scalars::MIN_PRECISION));
        }
        if self.command.uses_sizes() && self.command != Command::Scan && self.sizes.is_empty() {
            return fail("at least one size is required".into());
        }
        if self.command.uses_sizes() {
            for &d in &self.degrees {
                let r = d as usize / 2;
                if let Some(n) = self.sizes.iter().find(|&&n| n < d as usize + r + 1) {
                    return fail(format!("size n = {n} too small for degree {d}: need n - d >= {}", r + 1));
                }
            }
        }
        if self.command == Command::Scan && self.sizes.is_empty() && self.max_order < 3 {
            return fail("max order must be at least 3".into());
        }
        Ok(())
    }
}

/// Parses `2,5,9`, `2..30` (inclusive) and `16..512:16` (with step), or any
/// comma-separated mix of them.
pub fn parse_list<T>(text: &str) -> std::result::Result<Vec<T>, String>
where
    T: std::str::FromStr + TryFrom<u64> + Copy,
{
    let num = |s: &str| -> std::result::Result<u64, String> {
        s.trim().parse::<u64>().map_err(|_| format!("'{}' is not a nonnegative integer", s.trim()))
    };
    let cast = |v: u64| T::try_from(v).map_err(|_| format!("{v} is out of range"));
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            None => out.push(cast(num(part)?)?),
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, num(step)?),
                    None => (rest, 1),
                };
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let (lo, hi) = (num(lo)?, num(hi)?);
                if step == 0 || lo > hi {
                    return Err(format!("empty or invalid range '{}'", part.trim()));
                }
                let mut v = lo;
                while v <= hi {
                    out.push(cast(v)?);
                    v += step;
                }
            }
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}
