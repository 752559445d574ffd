//! Measured observables and phase-error propagation.
//!
//! Homodyne detection reads the phase quadrature of the (dark) output. Threshold
//! detection measures the fixed quadratic observable `Y` solving the symmetric
//! logarithmic derivative equation at `phi = 0`; it is built once from `(alpha, r, R)`
//! and then read out at whatever phase the interferometer actually has.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, IdentityResidual};
use crate::gaussian::{
    p_index, quadratic_moments, x_index, GaussianState, Moments, QuadraticObservable,
};
use crate::interferometer::{
    input_state, output_state, phase_section, phase_section_derivative, InterferometerConfig,
    Topology,
};
use crate::numeric::richardson_derivative;

/// Step for the finite-difference gain.
pub const GAIN_STEP: f64 = 1e-4;
/// Gains below this fraction of the uncancelled term magnitude are treated as zero.
const ZERO_GAIN_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetectionScheme {
    Homodyne,
    Threshold,
}

/// Error-propagation result at one phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub phi: f64,
    pub variance_y: f64,
    /// `d<Y>/dphi`.
    pub gain: f64,
    /// `variance_y / gain^2`.
    pub dphi_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseEstimate {
    Measured(ErrorPoint),
    /// The signal does not respond to the phase here (zero gain).
    NoSensitivity { phi: f64, variance_y: f64 },
}

impl PhaseEstimate {
    pub fn point(&self) -> Option<&ErrorPoint> {
        match self {
            PhaseEstimate::Measured(p) => Some(p),
            PhaseEstimate::NoSensitivity { .. } => None,
        }
    }

    pub fn dphi_sq(&self) -> Option<f64> {
        self.point().map(|p| p.dphi_sq)
    }

    pub fn phi(&self) -> f64 {
        match self {
            PhaseEstimate::Measured(p) => p.phi,
            PhaseEstimate::NoSensitivity { phi, .. } => *phi,
        }
    }
}

/// `p` of the single arm, or `p2` of the dark output port.
pub fn homodyne_observable(cfg: &InterferometerConfig) -> Result<QuadraticObservable> {
    match cfg.topology {
        Topology::SingleArm => QuadraticObservable::p_quadrature(1, 0),
        Topology::TwoArm => QuadraticObservable::p_quadrature(2, 1),
    }
}

/// The threshold-detector operator with the free block set to zero.
///
/// Single arm: `Y = -2 p o (sqrt(2) alpha cosh 2r + x sinh 2r)`.
/// Two arm: `Y = -2 [sqrt(2) alpha e^{r-R} cosh(R+r) p2
///                 + sinh(R+r) (e^{r-R} x1 p2 + e^{R-r} x2 p1)]`.
pub fn threshold_observable(cfg: &InterferometerConfig) -> Result<QuadraticObservable> {
    let cfg = cfg.validated()?;
    let root2_alpha = std::f64::consts::SQRT_2 * cfg.alpha;
    match cfg.topology {
        Topology::SingleArm => {
            let two_r = 2.0 * cfg.squeeze;
            Ok(QuadraticObservable::zero(1)?
                .with_linear(p_index(0), -2.0 * root2_alpha * two_r.cosh())
                .with_quadratic(x_index(0), p_index(0), -two_r.sinh()))
        }
        Topology::TwoArm => {
            let (r, big_r) = (cfg.squeeze, cfg.bright_squeeze);
            let sum = r + big_r;
            Ok(QuadraticObservable::zero(2)?
                .with_linear(p_index(1), -2.0 * root2_alpha * (r - big_r).exp() * sum.cosh())
                .with_quadratic(x_index(0), p_index(1), -sum.sinh() * (r - big_r).exp())
                .with_quadratic(x_index(1), p_index(0), -sum.sinh() * (big_r - r).exp()))
        }
    }
}

pub fn observable(cfg: &InterferometerConfig, scheme: DetectionScheme) -> Result<QuadraticObservable> {
    match scheme {
        DetectionScheme::Homodyne => homodyne_observable(cfg),
        DetectionScheme::Threshold => threshold_observable(cfg),
    }
}

/// Moments of `obs` on the output at `cfg.phi`.
pub fn signal_moments(cfg: &InterferometerConfig, obs: &QuadraticObservable) -> Result<Moments> {
    quadratic_moments(&output_state(cfg)?, obs)
}

/// `d<obs>/dphi` together with the magnitude of the terms that were summed to get it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gain {
    pub value: f64,
    pub scale: f64,
}

impl Gain {
    pub fn is_zero(&self) -> bool {
        self.value.abs() <= ZERO_GAIN_RATIO * self.scale
    }
}

/// Exact gain from the derivative of the phase section:
/// `m' = P' m0`, `V' = P' V0 P^T + P V0 P'^T`,
/// `d<obs>/dphi = c.m' + 2 m.M.m' + tr(M V')`.
pub fn gain(cfg: &InterferometerConfig, obs: &QuadraticObservable) -> Result<Gain> {
    let input = input_state(cfg)?;
    let p = phase_section(cfg.topology, cfg.phi)?;
    let dp = phase_section_derivative(cfg.topology, cfg.phi)?;
    if obs.linear().len() != dp.nrows() {
        return Err(Error::DimensionMismatch {
            expected: dp.nrows(),
            found: obs.linear().len(),
        });
    }
    let ps = p.matrix();
    let m = ps * input.mean();
    let dm = &dp * input.mean();
    let cross = &dp * input.cov() * ps.transpose();
    let dcov = &cross + cross.transpose();
    let mq = obs.quadratic();

    let value = obs.linear().dot(&dm) + 2.0 * m.dot(&(mq * &dm)) + (mq * &dcov).trace();

    // same sums with every factor replaced by its absolute value, so cancellations
    // inside the matrix products are visible
    let (abs_p, abs_dp) = (ps.abs(), dp.abs());
    let abs_m0 = input.mean().abs();
    let abs_m = &abs_p * &abs_m0;
    let abs_dm = &abs_dp * &abs_m0;
    let abs_cross = &abs_dp * input.cov().abs() * abs_p.transpose();
    let abs_dcov = &abs_cross + abs_cross.transpose();
    let abs_mq = mq.abs();
    let scale = obs.linear().abs().dot(&abs_dm)
        + 2.0 * abs_m.dot(&(&abs_mq * &abs_dm))
        + (&abs_mq * &abs_dcov).trace();
    Ok(Gain { value, scale })
}

/// Gain by five-point central differences at `GAIN_STEP` with one Richardson step.
pub fn gain_finite_difference(cfg: &InterferometerConfig, obs: &QuadraticObservable) -> Result<f64> {
    let mut failure = None;
    let d = richardson_derivative(
        |phi| match signal_moments(&cfg.with_phi(phi), obs) {
            Ok(m) => m.mean,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        cfg.phi,
        GAIN_STEP,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(d),
    }
}

/// Error propagation `(Delta phi)^2 = Var(Y) / (d<Y>/dphi)^2` for an arbitrary observable.
pub fn phase_error_for(cfg: &InterferometerConfig, obs: &QuadraticObservable) -> Result<PhaseEstimate> {
    let variance_y = signal_moments(cfg, obs)?.variance;
    let g = gain(cfg, obs)?;
    if g.is_zero() {
        return Ok(PhaseEstimate::NoSensitivity {
            phi: cfg.phi,
            variance_y,
        });
    }
    Ok(PhaseEstimate::Measured(ErrorPoint {
        phi: cfg.phi,
        variance_y,
        gain: g.value,
        dphi_sq: variance_y / (g.value * g.value),
    }))
}

/// Phase error of `scheme` at `cfg.phi`. The threshold observable is always the one
/// built for `phi = 0`.
pub fn phase_error(cfg: &InterferometerConfig, scheme: DetectionScheme) -> Result<PhaseEstimate> {
    let obs = observable(&cfg.with_phi(0.0), scheme)?;
    phase_error_for(cfg, &obs)
}

/// Residual of the defining equation of `Y` against the Fock oracle at truncation `fock_dim`.
pub fn sld_defining_check(cfg: &InterferometerConfig, fock_dim: usize) -> Result<IdentityResidual> {
    fock::threshold_identity_residual(cfg, fock_dim)
}

/// `<x^2 + p^2>` and `<(x^2 + p^2)^2>` of a single-mode signal.
pub fn readout_signal_moments(signal: &GaussianState) -> Result<(f64, f64)> {
    if signal.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: signal.n_modes(),
        });
    }
    let ring = QuadraticObservable::zero(1)?
        .with_quadratic(0, 0, 1.0)
        .with_quadratic(1, 1, 1.0);
    let m = quadratic_moments(signal, &ring)?;
    Ok((m.mean, m.variance + m.mean * m.mean))
}

/// Readout noise of `x o p` through a degenerate parametric coupling to a probe mode:
/// `[1/(gt)^2 - <x^2+p^2> + (gt)^2/4 <(x^2+p^2)^2>] <X^2>`.
///
/// `probe_x_variance` is `<X^2>` of the probe, whose mean `X` is taken to be zero.
pub fn parametric_readout_error(
    gt: f64,
    signal: &GaussianState,
    probe_x_variance: f64,
) -> Result<f64> {
    if !(gt > 0.0) || !gt.is_finite() {
        return Err(Error::NonPositiveCoupling(gt));
    }
    if !(probe_x_variance >= 0.0) {
        return Err(Error::Precondition(format!(
            "probe variance must be non-negative, got {probe_x_variance}"
        )));
    }
    let (first, second) = readout_signal_moments(signal)?;
    let g2 = gt * gt;
    Ok((1.0 / g2 - first + 0.25 * g2 * second) * probe_x_variance)
}
