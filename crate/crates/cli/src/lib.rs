//! Command dispatch for the `sqzphase` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use sqzphase::detection::parametric_readout_error;
use sqzphase::fock::verify::{self, Grid, OracleSettings};
use sqzphase::sensitivity::{
    linear_grid, optimize_displacement, peak_and_width, sweep, table1, tradeoff_report,
};
use sqzphase::{DetectionScheme, Error, GaussianState, PhaseEstimate, PhotonBudget, SymplecticTransform};

use config::{Command, RunConfig};
use output::Table;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::NonPositiveCoupling(_) => Failure::Config(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

/// A finished command: its table, and a numeric failure to report after writing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub failure: Option<String>,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }
}

pub fn scheme_label(s: DetectionScheme) -> &'static str {
    match s {
        DetectionScheme::Homodyne => "homodyne",
        DetectionScheme::Threshold => "threshold",
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, Failure> {
    match cfg.command {
        Command::Curve => curve(cfg),
        Command::Optimize => optimize(cfg),
        Command::Table1 => table(cfg),
        Command::Verify => verify_command(cfg),
        Command::Readout => readout(cfg),
        Command::Tradeoff => tradeoff(cfg),
    }
}

fn budget(cfg: &RunConfig) -> Result<PhotonBudget, Failure> {
    Ok(PhotonBudget::new(cfg.n_mean)?)
}

fn curve(cfg: &RunConfig) -> Result<Report, Failure> {
    let setup = optimize_displacement(budget(cfg)?, cfg.regime, cfg.scheme)?;
    let grid = linear_grid(cfg.phi_min, cfg.phi_max, cfg.phi_steps)?;
    let curve = sweep(&setup.config(0.0)?, cfg.scheme, &grid)?;
    let mut t = Table::new(&["phi", "dphi_sq", "gain", "var_y", "flag"]);
    for p in &curve.points {
        t.push(match p {
            PhaseEstimate::Measured(e) => {
                vec![e.phi.into(), e.dphi_sq.into(), e.gain.into(), e.variance_y.into(), "ok".into()]
            }
            PhaseEstimate::NoSensitivity { phi, variance_y } => {
                vec![(*phi).into(), f64::INFINITY.into(), 0.0.into(), (*variance_y).into(), "nosens".into()]
            }
        });
    }
    let failure = curve.all_blind().then(|| "no phase sensitivity anywhere on the grid".to_owned());
    Ok(Report { table: t, failure })
}

fn optimize(cfg: &RunConfig) -> Result<Report, Failure> {
    let setup = optimize_displacement(budget(cfg)?, cfg.regime, cfg.scheme)?;
    if setup.dphi0_sq.is_none() {
        return Err(Failure::Numeric("no phase sensitivity with an empty photon budget".into()));
    }
    let merit = peak_and_width(&setup)?;
    let mut t = Table::new(&[
        "topology",
        "scheme",
        "n_mean",
        "alpha_sq",
        "closed_form_alpha_sq",
        "dphi0_sq",
        "width_sq",
        "unimodal",
    ]);
    t.push(vec![
        setup.regime.label().into(),
        scheme_label(setup.scheme).into(),
        setup.n_mean.into(),
        setup.alpha_sq.into(),
        setup.closed_form_alpha_sq.into(),
        merit.dphi0_sq.into(),
        merit.width_sq.into(),
        setup.unimodal.into(),
    ]);
    Ok(Report::ok(t))
}

fn table(cfg: &RunConfig) -> Result<Report, Failure> {
    let mut t = Table::new(&[
        "topology",
        "scheme",
        "alpha_sq",
        "dphi0_sq",
        "width_sq",
        "paper_dphi0_sq",
        "paper_width_sq",
        "rel_err_peak",
        "rel_err_width",
    ]);
    for row in table1(budget(cfg)?)? {
        t.push(vec![
            row.regime.label().into(),
            scheme_label(row.scheme).into(),
            row.setup.alpha_sq.into(),
            row.merit.dphi0_sq.into(),
            row.merit.width_sq.into(),
            row.reference.dphi0_sq.value.into(),
            row.reference.width_sq.value.into(),
            row.rel_err_peak.into(),
            row.rel_err_width.into(),
        ]);
    }
    Ok(Report::ok(t))
}

fn verify_command(cfg: &RunConfig) -> Result<Report, Failure> {
    let defaults = OracleSettings::default();
    let settings = OracleSettings {
        start_dim_single: cfg.fock_dim,
        max_dim_single: defaults.max_dim_single.max(cfg.fock_dim),
        ..defaults
    };
    let grid = if cfg.quick { Grid::small() } else { Grid::default() };
    let reports = verify::run(&grid, &settings, &verify::default_identity_points(cfg.fock_dim))?;
    let mut t = Table::new(&["check", "max_error", "tolerance", "points", "max_dim", "passed"]);
    for r in &reports {
        t.push(vec![
            r.name.as_str().into(),
            r.max_error.into(),
            r.tolerance.into(),
            r.points.into(),
            r.max_dim.into(),
            r.passed.into(),
        ]);
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| format!("checks failed: {}", failed.join(", ")));
    Ok(Report { table: t, failure })
}

/// Readout of the squeezed vacuum holding the whole budget, the single-arm threshold
/// optimum, over a geometric grid of coupling-time products.
fn readout(cfg: &RunConfig) -> Result<Report, Failure> {
    let r = cfg.n_mean.sqrt().asinh();
    let signal = GaussianState::vacuum(1)?.apply(&SymplecticTransform::squeeze(1, 0, r)?)?;
    let probe = GaussianState::vacuum(1)?.apply(&SymplecticTransform::squeeze(1, 0, -cfg.probe_squeeze)?)?;
    let probe_x_variance = probe.cov()[(0, 0)];
    let ratio = (cfg.gt_max / cfg.gt_min).powf(1.0 / (cfg.gt_steps - 1) as f64);
    let mut t = Table::new(&["gt", "delta_sq_meas", "probe_x_variance"]);
    for k in 0..cfg.gt_steps {
        let gt = if k == cfg.gt_steps - 1 { cfg.gt_max } else { cfg.gt_min * ratio.powi(k as i32) };
        let value = parametric_readout_error(gt, &signal, probe_x_variance)?;
        t.push(vec![gt.into(), value.into(), probe_x_variance.into()]);
    }
    Ok(Report::ok(t))
}

fn tradeoff(cfg: &RunConfig) -> Result<Report, Failure> {
    let mut t = Table::new(&[
        "topology",
        "scheme",
        "log_n_width",
        "log2_n_dphi0",
        "difference",
        "expected_exception",
    ]);
    for e in tradeoff_report(budget(cfg)?)? {
        t.push(vec![
            e.regime.label().into(),
            scheme_label(e.scheme).into(),
            e.log_n_width.into(),
            e.log2_n_dphi0.into(),
            e.difference.into(),
            e.expected_exception.into(),
        ]);
    }
    Ok(Report::ok(t))
}

/// Writes the report where the configuration asks for it.
pub fn emit(cfg: &RunConfig, report: &Report) -> Result<(), Failure> {
    let result = match &cfg.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Config(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            report.table.write(cfg.format, &mut w).and_then(|_| w.flush())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.table.write(cfg.format, &mut lock)
        }
    };
    result.map_err(|e| Failure::Numeric(format!("writing output failed: {e}")))
}
