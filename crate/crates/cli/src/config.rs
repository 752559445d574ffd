//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use sqzphase::{DetectionScheme, Regime};

use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Phase error over a phase grid at the optimal displacement.
    Curve,
    /// Optimal split of the photon budget between displacement and squeezing.
    Optimize,
    /// Peak error and width for all six configurations.
    Table1,
    /// Gaussian results against the truncated Fock-space model.
    Verify,
    /// Readout noise of the parametric x∘p measurement versus coupling.
    Readout,
    /// Width against peak-error relation for all configurations.
    Tradeoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
pub enum TopologyArg {
    /// One arm, N = alpha^2 + sinh^2 r.
    #[serde(rename = "single")]
    #[value(name = "single")]
    Single,
    /// Two arms, bright port unsqueezed.
    #[serde(rename = "two_r0")]
    #[value(name = "two_r0")]
    TwoR0,
    /// Two arms squeezed with R = -r.
    #[serde(rename = "two_anti")]
    #[value(name = "two_anti")]
    TwoAnti,
}

impl From<TopologyArg> for Regime {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Single => Regime::SingleArm,
            TopologyArg::TwoR0 => Regime::TwoArmR0,
            TopologyArg::TwoAnti => Regime::TwoArmAnti,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Homodyne,
    Threshold,
}

impl From<SchemeArg> for DetectionScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Homodyne => DetectionScheme::Homodyne,
            SchemeArg::Threshold => DetectionScheme::Threshold,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sqzphase", version, about = "Phase sensitivity of squeezed-light interferometers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub flags: Settings,
}

/// Every setting, optional so that flags can be layered over a file.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// JSON file with any of these settings; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Command to run when none is given on the command line (file only).
    #[arg(skip)]
    pub command: Option<Command>,
    #[arg(long, global = true)]
    pub topology: Option<TopologyArg>,
    #[arg(long, global = true)]
    pub scheme: Option<SchemeArg>,
    /// Mean number of photons interacting with the phase.
    #[arg(long = "n", global = true, allow_hyphen_values = true)]
    #[serde(alias = "n")]
    pub n_mean: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi_max: Option<f64>,
    #[arg(long, global = true)]
    pub phi_steps: Option<usize>,
    /// Starting single-mode Fock truncation for `verify`.
    #[arg(long, global = true)]
    pub fock_dim: Option<usize>,
    /// Reduced oracle grid for `verify`.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub quick: Option<bool>,
    /// Smallest coupling-time product for `readout`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gt_min: Option<f64>,
    #[arg(long, global = true)]
    pub gt_max: Option<f64>,
    #[arg(long, global = true)]
    pub gt_steps: Option<usize>,
    /// Squeeze factor of the readout probe in its measured quadrature.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub probe_squeeze: Option<f64>,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    #[serde(alias = "output_path")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        Settings { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Settings {
    /// `self` with every unset field taken from `base`.
    pub fn over(self, base: Settings) -> Settings {
        let top = self;
        overlay!(
            base, top, config, command, topology, scheme, n_mean, phi_min, phi_max, phi_steps,
            fock_dim, quick, gt_min, gt_max, gt_steps, probe_squeeze, output, format
        )
    }

    pub fn from_file(path: &Path) -> Result<Settings, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub regime: Regime,
    pub scheme: DetectionScheme,
    pub n_mean: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub fock_dim: usize,
    pub quick: bool,
    pub gt_min: f64,
    pub gt_max: f64,
    pub gt_steps: usize,
    pub probe_squeeze: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(command: Option<Command>, flags: Settings) -> Result<RunConfig, String> {
        let file = match &flags.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let s = flags.over(file);
        let command = command
            .or(s.command)
            .ok_or("no command given (curve, optimize, table1, verify, readout, tradeoff)")?;
        let cfg = RunConfig {
            command,
            regime: s.topology.unwrap_or(TopologyArg::Single).into(),
            scheme: s.scheme.unwrap_or(SchemeArg::Homodyne).into(),
            n_mean: s.n_mean.unwrap_or(10.0),
            phi_min: s.phi_min.unwrap_or(-0.5),
            phi_max: s.phi_max.unwrap_or(0.5),
            phi_steps: s.phi_steps.unwrap_or(101),
            fock_dim: s.fock_dim.unwrap_or(sqzphase::fock::DEFAULT_DIM_SINGLE),
            quick: s.quick.unwrap_or(false),
            gt_min: s.gt_min.unwrap_or(1e-3),
            gt_max: s.gt_max.unwrap_or(10.0),
            gt_steps: s.gt_steps.unwrap_or(41),
            probe_squeeze: s.probe_squeeze.unwrap_or(0.0),
            output: s.output,
            format: s.format.unwrap_or(Format::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.n_mean >= 0.0) || !self.n_mean.is_finite() {
            return Err(format!("n must be a finite number >= 0, got {}", self.n_mean));
        }
        if !self.phi_min.is_finite() || !self.phi_max.is_finite() || !(self.phi_min < self.phi_max) {
            return Err(format!("need phi_min < phi_max, got {} and {}", self.phi_min, self.phi_max));
        }
        if self.phi_steps < 1 {
            return Err("phi_steps must be at least 1".into());
        }
        if self.fock_dim < 4 {
            return Err(format!("fock_dim must be at least 4, got {}", self.fock_dim));
        }
        if !(self.gt_min > 0.0) || !self.gt_max.is_finite() || !(self.gt_min < self.gt_max) {
            return Err(format!("need 0 < gt_min < gt_max, got {} and {}", self.gt_min, self.gt_max));
        }
        if self.gt_steps < 2 {
            return Err("gt_steps must be at least 2".into());
        }
        if !self.probe_squeeze.is_finite() {
            return Err("probe_squeeze must be finite".into());
        }
        Ok(())
    }
}
