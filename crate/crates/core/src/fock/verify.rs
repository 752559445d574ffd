//! Equivalence suite: the Gaussian engine against the truncated Fock model.

use std::cell::RefCell;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    complete_sector_distance, moments, phase_generator, prepare, FockObservable, FockState,
    TwoModeEvolver,
};
use crate::detection::{self, DetectionScheme};
use crate::error::{Error, Result};
use crate::gaussian::{quadratic_moments, QuadraticObservable};
use crate::interferometer::{
    generator_variance_closed_form, input_state, InterferometerConfig, Topology,
};
use crate::numeric::richardson_derivative;

/// Relative agreement demanded between the two engines.
pub const RELATIVE_TOLERANCE: f64 = 1e-8;
/// Values smaller than this are compared on an absolute scale `RELATIVE_TOLERANCE * FLOOR`.
const FLOOR: f64 = 1e-2;
/// Truncation tail the oracle must reach before a comparison counts.
pub const ORACLE_TAIL: f64 = 1e-12;
/// Accepted residual of the threshold-operator identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Finite-difference step for oracle gains.
const ORACLE_STEP: f64 = 1e-3;

/// Outcome of one family of comparisons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Largest `|a - b| / max(|a|, |b|, 0.01)` seen.
    pub max_error: f64,
    pub tolerance: f64,
    pub points: usize,
    /// Largest truncation used.
    pub max_dim: usize,
    pub passed: bool,
}

impl CheckReport {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_error: 0.0,
            tolerance,
            points: 0,
            max_dim: 0,
            passed: true,
        }
    }

    fn record(&mut self, err: f64, dim: usize) {
        self.absorb(err, 1, dim);
    }

    fn absorb(&mut self, err: f64, points: usize, dim: usize) {
        // a NaN sticks and fails the report
        if err.is_nan() || (!self.max_error.is_nan() && err > self.max_error) {
            self.max_error = err;
        }
        self.points += points;
        self.max_dim = self.max_dim.max(dim);
        self.passed = self.max_error <= self.tolerance;
    }

    fn merge(&mut self, other: &CheckReport) {
        self.absorb(other.max_error, other.points, other.max_dim);
    }
}

/// `|a - b| / max(|a|, |b|, 0.01)`.
pub fn scaled_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(FLOOR)
}

/// Parameter grid of the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub alphas: Vec<f64>,
    /// `r` values of the single arm.
    pub squeezes: Vec<f64>,
    /// `(R, r)` pairs of the two-arm interferometer.
    pub squeeze_pairs: Vec<(f64, f64)>,
    pub phis: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 1.0, 2.0, 3.0],
            squeezes: vec![0.0, 0.5, 1.0],
            squeeze_pairs: vec![(0.0, 0.5), (0.0, 1.0), (-0.5, 0.5), (-1.0, 1.0), (0.5, 0.25), (1.0, 0.5)],
            phis: vec![-0.7, -0.2, 0.0, 0.35, 0.7],
        }
    }
}

impl Grid {
    /// A coarse grid that runs in well under a second.
    pub fn small() -> Self {
        Self {
            alphas: vec![0.0, 1.5],
            squeezes: vec![0.0, 0.6],
            squeeze_pairs: vec![(0.0, 0.5), (-0.4, 0.4)],
            phis: vec![-0.3, 0.0, 0.5],
        }
    }

    pub fn configs(&self) -> Vec<InterferometerConfig> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &phi in &self.phis {
                for &r in &self.squeezes {
                    out.push(InterferometerConfig { topology: Topology::SingleArm, alpha, squeeze: r, bright_squeeze: 0.0, phi });
                }
                for &(big_r, r) in &self.squeeze_pairs {
                    out.push(InterferometerConfig { topology: Topology::TwoArm, alpha, squeeze: r, bright_squeeze: big_r, phi });
                }
            }
        }
        out
    }
}

/// Truncation limits of the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub start_dim_single: usize,
    pub start_dim_two: usize,
    pub max_dim_single: usize,
    pub max_dim_two: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            start_dim_single: 40,
            start_dim_two: 50,
            max_dim_single: 640,
            max_dim_two: 320,
        }
    }
}

/// Two-mode evolvers for the truncations `start * 2^k`, built once on first use.
struct EvolverCache {
    slots: Vec<(usize, OnceLock<TwoModeEvolver>)>,
}

impl EvolverCache {
    fn new(settings: &OracleSettings) -> Self {
        let mut slots = Vec::new();
        let mut dim = settings.start_dim_two.max(4);
        while dim <= settings.max_dim_two {
            slots.push((dim, OnceLock::new()));
            dim *= 2;
        }
        Self { slots }
    }

    fn get(&self, dim: usize) -> Result<&TwoModeEvolver> {
        let (_, slot) = self
            .slots
            .iter()
            .find(|(d, _)| *d == dim)
            .ok_or_else(|| Error::Precondition(format!("no evolver for truncation {dim}")))?;
        if slot.get().is_none() {
            let built = TwoModeEvolver::new(dim)?;
            let _ = slot.set(built);
        }
        Ok(slot.get().expect("slot was just filled"))
    }
}

/// Prepared state at the smallest truncation whose input and output tails (at the
/// given phases) are below `ORACLE_TAIL`.
struct Oracle<'a> {
    cfg: InterferometerConfig,
    input: FockState,
    cache: &'a EvolverCache,
    // both gains sample the same phases
    evolved: RefCell<Vec<(f64, FockState)>>,
}

impl<'a> Oracle<'a> {
    fn build(
        cfg: &InterferometerConfig,
        settings: &OracleSettings,
        cache: &'a EvolverCache,
    ) -> Result<Self> {
        let (mut dim, max) = match cfg.topology {
            Topology::SingleArm => (settings.start_dim_single, settings.max_dim_single),
            Topology::TwoArm => (settings.start_dim_two, settings.max_dim_two),
        };
        loop {
            let attempt = prepare(cfg, dim).and_then(|input| {
                let oracle = Oracle { cfg: *cfg, input, cache, evolved: RefCell::default() };
                let extremes = [cfg.phi - 2.0 * ORACLE_STEP, cfg.phi + 2.0 * ORACLE_STEP];
                let mut tail = oracle.input.tail_mass();
                for phi in extremes {
                    tail = tail.max(oracle.evolve(phi)?.tail_mass());
                }
                Ok((tail, oracle))
            });
            let tail = match attempt {
                Ok((tail, oracle)) if tail < ORACLE_TAIL => return Ok(oracle),
                Ok((tail, _)) => tail,
                Err(Error::Truncation { tail, .. }) => tail,
                Err(e) => return Err(e),
            };
            if 2 * dim > max {
                return Err(Error::Truncation { dim, tail, suggested: 2 * dim });
            }
            dim *= 2;
        }
    }

    fn dim(&self) -> usize {
        self.input.dim()
    }

    fn evolve(&self, phi: f64) -> Result<FockState> {
        if let Some((_, s)) = self.evolved.borrow().iter().find(|(p, _)| *p == phi) {
            return Ok(s.clone());
        }
        let state = match self.cfg.topology {
            Topology::SingleArm => super::evolve_phase(&self.input, &self.cfg.with_phi(phi))?,
            Topology::TwoArm => self.cache.get(self.dim())?.evolve(&self.input, phi)?,
        };
        self.evolved.borrow_mut().push((phi, state.clone()));
        Ok(state)
    }

    fn moments_at(&self, op: &FockObservable, phi: f64) -> Result<crate::gaussian::Moments> {
        moments(&self.evolve(phi)?, op)
    }

    fn gain(&self, op: &FockObservable) -> Result<f64> {
        let mut failure = None;
        let d = richardson_derivative(
            |phi| match self.moments_at(op, phi) {
                Ok(m) => m.mean,
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            },
            self.cfg.phi,
            ORACLE_STEP,
        );
        failure.map_or(Ok(d), Err)
    }
}

fn total_number_observable(n_modes: usize) -> Result<QuadraticObservable> {
    let mut total = QuadraticObservable::photon_number(n_modes, 0)?;
    for mode in 1..n_modes {
        total = total.combine(1.0, &QuadraticObservable::photon_number(n_modes, mode)?, 1.0)?;
    }
    Ok(total)
}

const NAMES: [&str; 5] = [
    "photon number statistics",
    "phase generator variance",
    "homodyne signal moments and gain",
    "threshold signal moments and gain",
    "phase error",
];

/// Per-point errors, one per entry of `NAMES`.
fn compare_point(
    cfg: &InterferometerConfig,
    settings: &OracleSettings,
    cache: &EvolverCache,
) -> Result<([f64; 5], usize)> {
    let oracle = Oracle::build(cfg, settings, cache)?;
    let dim = oracle.dim();
    let n_modes = cfg.n_modes();
    let output = oracle.evolve(cfg.phi)?;
    let gaussian_out = crate::interferometer::output_state(cfg)?;

    let total = total_number_observable(n_modes)?;
    let fock_n = moments(&output, &FockObservable::from_quadratic(&total, dim)?)?;
    let gauss_n = quadratic_moments(&gaussian_out, &total)?;
    let number_err = scaled_error(fock_n.mean, gauss_n.mean).max(scaled_error(fock_n.variance, gauss_n.variance));

    let generator = moments(&oracle.input, &phase_generator(cfg.topology, dim)?)?;
    let closed = generator_variance_closed_form(cfg);
    let generator_gauss = quadratic_moments(&input_state(cfg)?, &crate::interferometer::phase_generator(cfg.topology)?)?;
    let generator_err = scaled_error(generator.variance, closed)
        .max(scaled_error(generator_gauss.variance, closed))
        .max(scaled_error(generator.mean, generator_gauss.mean));

    let mut scheme_err = [0.0; 2];
    let mut phase_err = 0.0_f64;
    for (k, scheme) in [DetectionScheme::Homodyne, DetectionScheme::Threshold].into_iter().enumerate() {
        let obs = detection::observable(&cfg.with_phi(0.0), scheme)?;
        let op = FockObservable::from_quadratic(&obs, dim)?;
        let fock = moments(&output, &op)?;
        let gauss = quadratic_moments(&gaussian_out, &obs)?;
        let fock_gain = oracle.gain(&op)?;
        let gauss_gain = detection::gain(cfg, &obs)?.value;
        scheme_err[k] = scaled_error(fock.mean, gauss.mean)
            .max(scaled_error(fock.variance, gauss.variance))
            .max(scaled_error(fock_gain, gauss_gain));
        // near a zero of the gain the ratio is ill-conditioned, so only compare where it is sizeable
        if gauss_gain.abs() >= 0.1 {
            let fock_dphi = fock.variance / (fock_gain * fock_gain);
            let gauss_dphi = gauss.variance / (gauss_gain * gauss_gain);
            phase_err = phase_err.max(scaled_error(fock_dphi, gauss_dphi));
        }
    }
    Ok(([number_err, generator_err, scheme_err[0], scheme_err[1], phase_err], dim))
}

/// Compares photon statistics, generator variances, signal moments, gains and phase
/// errors of both engines on every grid point.
pub fn moment_equivalence(grid: &Grid, settings: &OracleSettings) -> Result<Vec<CheckReport>> {
    let cache = EvolverCache::new(settings);
    let configs = grid.configs();
    let results: Vec<([f64; 5], usize)> = configs
        .par_iter()
        .map(|cfg| compare_point(cfg, settings, &cache))
        .collect::<Result<_>>()?;
    let mut reports: Vec<CheckReport> = NAMES.iter().map(|n| CheckReport::new(n, RELATIVE_TOLERANCE)).collect();
    for (errs, dim) in &results {
        for (report, &e) in reports.iter_mut().zip(errs) {
            report.record(e, *dim);
        }
    }
    Ok(reports)
}

/// Configuration and truncation at which the threshold-operator identity is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityPoint {
    pub cfg: InterferometerConfig,
    pub dim: usize,
}

/// Three single-arm points at `D = single_dim` and three two-arm points at `D = 30`.
pub fn default_identity_points(single_dim: usize) -> Vec<IdentityPoint> {
    let single = [(0.0, 0.8), (1.0, 0.5), (2.0, 0.3)]
        .map(|(a, r)| (InterferometerConfig { topology: Topology::SingleArm, alpha: a, squeeze: r, bright_squeeze: 0.0, phi: 0.0 }, single_dim));
    let two = [(1.0, 0.0, 0.3), (1.0, -0.3, 0.3), (0.8, 0.2, 0.2)]
        .map(|(a, big_r, r)| (InterferometerConfig { topology: Topology::TwoArm, alpha: a, squeeze: r, bright_squeeze: big_r, phi: 0.0 }, 30));
    single.into_iter().chain(two).map(|(cfg, dim)| IdentityPoint { cfg, dim }).collect()
}

/// Threshold-operator identity at each point.
pub fn identity_check(points: &[IdentityPoint]) -> Result<CheckReport> {
    let rows: Vec<(f64, usize)> = points
        .par_iter()
        .map(|p| super::threshold_identity_residual(&p.cfg, p.dim).map(|r| (r.residual, p.dim)))
        .collect::<Result<_>>()?;
    let mut report = CheckReport::new("threshold operator identity", IDENTITY_TOLERANCE);
    for (residual, dim) in rows {
        report.record(residual, dim);
    }
    Ok(report)
}

/// Two independent constructions of the two-arm phase shift on a small truncation,
/// compared on the total-number sectors that fit completely in the box.
pub fn evolution_paths_check(dim: usize) -> Result<CheckReport> {
    let evolver = TwoModeEvolver::new(dim)?;
    let mut report = CheckReport::new("two-mode evolution paths", RELATIVE_TOLERANCE);
    for (alpha, big_r, r) in [(1.0, 0.0, 0.3), (0.8, 0.2, 0.2), (0.5, -0.3, 0.3)] {
        let cfg = InterferometerConfig::two_arm(alpha, big_r, r, 0.0)?;
        let input = prepare(&cfg, dim)?;
        for phi in [-0.7, 0.2, 0.7] {
            let a = evolver.evolve(&input, phi)?;
            let b = evolver.evolve_via_arms(&input, phi)?;
            report.record(complete_sector_distance(&a, &b)?, dim);
        }
    }
    Ok(report)
}

/// The whole suite: moment equivalence on `grid`, the identity at `identity_points`,
/// and the two evolution paths at `D = 30`.
pub fn run(grid: &Grid, settings: &OracleSettings, identity_points: &[IdentityPoint]) -> Result<Vec<CheckReport>> {
    let mut reports = moment_equivalence(grid, settings)?;
    reports.push(identity_check(identity_points)?);
    reports.push(evolution_paths_check(30)?);
    Ok(reports)
}

/// Folds reports of the same name together.
pub fn combine(reports: &[CheckReport]) -> Vec<CheckReport> {
    let mut out: Vec<CheckReport> = Vec::new();
    for r in reports {
        match out.iter_mut().find(|o| o.name == r.name) {
            Some(o) => o.merge(r),
            None => out.push(r.clone()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let reports = run(&Grid::small(), &OracleSettings::default(), &default_identity_points(80)).unwrap();
        for r in &reports {
            assert!(r.passed, "{r:?}");
            assert!(r.points > 0);
        }
    }

    #[test]
    fn scaled_error_uses_floor() {
        assert_eq!(scaled_error(0.0, 1e-4), 1e-2);
        assert!((scaled_error(100.0, 101.0) - 1.0 / 101.0).abs() < 1e-15);
    }

    #[test]
    fn nan_fails_a_report() {
        let mut r = CheckReport::new("x", 1.0);
        r.record(f64::NAN, 4);
        r.record(0.5, 4);
        assert!(!r.passed);
    }

    #[test]
    fn combine_merges_names() {
        let mut a = CheckReport::new("a", 1.0);
        a.record(0.5, 10);
        let mut b = CheckReport::new("a", 1.0);
        b.record(0.7, 20);
        b.record(0.1, 20);
        let merged = combine(&[a, b]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].points, 3);
        assert_eq!(merged[0].max_error, 0.7);
        assert_eq!(merged[0].max_dim, 20);
    }
}
