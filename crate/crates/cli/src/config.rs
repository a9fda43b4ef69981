//! Experiment configuration: built-in defaults, then a flat `key = value`
//! file, then command-line flags, each overriding the previous layer.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use noma_core::simulator::SimConfig;
use noma_core::{PowerProfile, Scenario};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::from_str_ignoring_case(s)
    }
}

impl Format {
    fn from_str_ignoring_case(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format '{other}' (expected csv, json or text)")),
        }
    }
}

/// Sweepable quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    M,
    Tau1,
    Tau2,
    Gamma,
    V1,
    V2,
    PBaseline,
}

impl Axis {
    pub const ALL: [Axis; 7] =
        [Axis::M, Axis::Tau1, Axis::Tau2, Axis::Gamma, Axis::V1, Axis::V2, Axis::PBaseline];

    pub fn name(self) -> &'static str {
        match self {
            Axis::M => "m",
            Axis::Tau1 => "tau1",
            Axis::Tau2 => "tau2",
            Axis::Gamma => "gamma",
            Axis::V1 => "v1",
            Axis::V2 => "v2",
            Axis::PBaseline => "p_baseline",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let valid: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
            CliError::Config(format!("invalid sweep axis '{s}'; valid axes: {}", valid.join(", ")))
        })
    }
}

/// One configuration layer; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, Args)]
pub struct RawConfig {
    /// Flat `key = value` configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of contending users.
    #[arg(long)]
    pub m: Option<usize>,
    /// High-mode received power (noise-normalized).
    #[arg(long)]
    pub v1: Option<f64>,
    /// Low-mode received power (noise-normalized).
    #[arg(long)]
    pub v2: Option<f64>,
    /// SINR decoding threshold (linear).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Probability of transmitting in high power mode.
    #[arg(long)]
    pub tau1: Option<f64>,
    /// Probability of transmitting in low power mode.
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Simulated slots per replication.
    #[arg(long)]
    pub slots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<u32>,
    /// Sweep variable: m, tau1, tau2, gamma, v1, v2 or p_baseline.
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RawConfig {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &RawConfig) -> RawConfig {
        overlay!(self, top, config, m, v1, v2, gamma, tau1, tau2, slots, seed, replications, axis, start, stop, step, format, output);
        self
    }

    pub fn parse_file(path: &Path) -> Result<RawConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse_str(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse_str(text: &str) -> Result<RawConfig, CliError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| CliError::Config(format!("line {}: invalid {what} '{value}' for key '{key}'", lineno + 1));
            match key {
                "m" => raw.m = Some(value.parse().map_err(|_| bad("integer"))?),
                "v1" => raw.v1 = Some(value.parse().map_err(|_| bad("number"))?),
                "v2" => raw.v2 = Some(value.parse().map_err(|_| bad("number"))?),
                "gamma" => raw.gamma = Some(value.parse().map_err(|_| bad("number"))?),
                "tau1" => raw.tau1 = Some(value.parse().map_err(|_| bad("number"))?),
                "tau2" => raw.tau2 = Some(value.parse().map_err(|_| bad("number"))?),
                "slots" => raw.slots = Some(value.parse().map_err(|_| bad("integer"))?),
                "seed" => raw.seed = Some(value.parse().map_err(|_| bad("integer"))?),
                "replications" => raw.replications = Some(value.parse().map_err(|_| bad("integer"))?),
                "axis" => raw.axis = Some(value.to_string()),
                "start" => raw.start = Some(value.parse().map_err(|_| bad("number"))?),
                "stop" => raw.stop = Some(value.parse().map_err(|_| bad("number"))?),
                "step" => raw.step = Some(value.parse().map_err(|_| bad("number"))?),
                "format" => raw.format = Some(value.parse().map_err(|_| bad("format"))?),
                "output" => raw.output = Some(PathBuf::from(value)),
                other => return Err(CliError::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        Ok(raw)
    }

    /// Applies the layers: defaults, then the file named by `--config`, then
    /// the flags in `self`.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let merged = match &self.config {
            Some(path) => RawConfig::parse_file(path)?.overlay(self),
            None => self.clone(),
        };
        ExperimentConfig::from_raw(&merged)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    const MAX_POINTS: usize = 100_000;

    /// `start + k * step` for every `k` with the value not past `stop`.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(CliError::Config(format!("sweep step must be positive, got {}", self.step)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            return Err(CliError::Config(format!(
                "sweep range must satisfy start <= stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        if n >= Self::MAX_POINTS {
            return Err(CliError::Config(format!("sweep has more than {} points", Self::MAX_POINTS)));
        }
        Ok((0..=n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

/// Fully resolved settings. The profile and sweep are checked only by the
/// commands that use them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub tau1: f64,
    pub tau2: f64,
    pub sim: SimConfig,
    pub axis: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub const DEFAULT_TAU: f64 = 0.1;

    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let scenario = Scenario::new(
            raw.m.unwrap_or(Scenario::DEFAULT_M),
            raw.v1.unwrap_or(Scenario::DEFAULT_V1),
            raw.v2.unwrap_or(Scenario::DEFAULT_V2),
            raw.gamma.unwrap_or(Scenario::DEFAULT_GAMMA),
        )?;
        let defaults = SimConfig::default();
        let sim = SimConfig {
            slots: raw.slots.unwrap_or(defaults.slots),
            seed: raw.seed.unwrap_or(defaults.seed),
            replications: raw.replications.unwrap_or(defaults.replications),
            channel: None,
        };
        sim.validate()?;
        Ok(Self {
            scenario,
            tau1: raw.tau1.unwrap_or(Self::DEFAULT_TAU),
            tau2: raw.tau2.unwrap_or(Self::DEFAULT_TAU),
            sim,
            axis: raw.axis.clone(),
            start: raw.start,
            stop: raw.stop,
            step: raw.step,
            format: raw.format.unwrap_or(Format::Csv),
            output: raw.output.clone(),
        })
    }

    pub fn profile(&self) -> Result<PowerProfile, CliError> {
        Ok(PowerProfile::new(self.tau1, self.tau2)?)
    }

    pub fn sweep(&self) -> Result<SweepSpec, CliError> {
        let axis: Axis = self
            .axis
            .as_deref()
            .ok_or_else(|| CliError::Config("sweep requires --axis".into()))?
            .parse()?;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Config(format!("sweep requires --{name}")))
        };
        Ok(SweepSpec {
            axis,
            start: need(self.start, "start")?,
            stop: need(self.stop, "stop")?,
            step: need(self.step, "step")?,
        })
    }
}
