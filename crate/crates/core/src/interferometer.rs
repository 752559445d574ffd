//! The single-arm and antisymmetric two-arm interferometers as Gaussian pipelines.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    p_index, quadratic_moments_with_scale, x_index, GaussianState, QuadraticObservable,
    SymplecticTransform,
};

const SQUEEZE_LIMIT: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    SingleArm,
    TwoArm,
}

impl Topology {
    pub fn n_modes(self) -> usize {
        match self {
            Topology::SingleArm => 1,
            Topology::TwoArm => 2,
        }
    }
}

/// One physical scenario.
///
/// `squeeze` is `r`, the phase-squeezing of the single-arm input or of the dark
/// (second) port of the two-arm interferometer; `bright_squeeze` is `R`, the squeezing
/// of the displaced first port (two-arm only). `phi` is the true phase; in the two-arm
/// case the arms pick up `+phi` and `-phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    pub topology: Topology,
    pub alpha: f64,
    pub squeeze: f64,
    pub bright_squeeze: f64,
    pub phi: f64,
}

impl InterferometerConfig {
    pub fn single_arm(alpha: f64, squeeze: f64, phi: f64) -> Result<Self> {
        Self {
            topology: Topology::SingleArm,
            alpha,
            squeeze,
            bright_squeeze: 0.0,
            phi,
        }
        .validated()
    }

    pub fn two_arm(alpha: f64, bright_squeeze: f64, squeeze: f64, phi: f64) -> Result<Self> {
        Self {
            topology: Topology::TwoArm,
            alpha,
            squeeze,
            bright_squeeze,
            phi,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        let fields = [self.alpha, self.squeeze, self.bright_squeeze, self.phi];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite parameter in {self:?}")));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        if self.squeeze.abs() > SQUEEZE_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "squeeze factor r = {} outside [-{SQUEEZE_LIMIT}, {SQUEEZE_LIMIT}]",
                self.squeeze
            )));
        }
        if self.bright_squeeze.abs() > SQUEEZE_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "squeeze factor R = {} outside [-{SQUEEZE_LIMIT}, {SQUEEZE_LIMIT}]",
                self.bright_squeeze
            )));
        }
        if self.topology == Topology::SingleArm && self.bright_squeeze != 0.0 {
            return Err(Error::InvalidConfig(
                "single-arm configuration must have R = 0".into(),
            ));
        }
        Ok(self)
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn n_modes(&self) -> usize {
        self.topology.n_modes()
    }
}

/// Mean number of photons interacting with the phase object(s).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PhotonBudget(f64);

impl PhotonBudget {
    pub fn new(n_mean: f64) -> Result<Self> {
        if !(n_mean >= 0.0) || !n_mean.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "mean photon number must be finite and non-negative, got {n_mean}"
            )));
        }
        Ok(Self(n_mean))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A phase-error lower bound, or the absence of any phase information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseBound {
    Finite(f64),
    NoInformation,
}

impl PhaseBound {
    pub fn finite(self) -> Option<f64> {
        match self {
            PhaseBound::Finite(v) => Some(v),
            PhaseBound::NoInformation => None,
        }
    }
}

/// Squeezing and displacement of the inputs, before any phase shift.
pub fn input_preparation(cfg: &InterferometerConfig) -> Result<SymplecticTransform> {
    let cfg = cfg.validated()?;
    match cfg.topology {
        Topology::SingleArm => SymplecticTransform::squeeze(1, 0, cfg.squeeze)?
            .then(&SymplecticTransform::displacement(1, 0, cfg.alpha)?),
        Topology::TwoArm => SymplecticTransform::squeeze(2, 0, cfg.bright_squeeze)?
            .then(&SymplecticTransform::squeeze(2, 1, cfg.squeeze)?)?
            .then(&SymplecticTransform::displacement(2, 0, cfg.alpha)?),
    }
}

/// State entering the phase-shifting element(s); equal to the output at `phi = 0`.
pub fn input_state(cfg: &InterferometerConfig) -> Result<GaussianState> {
    GaussianState::vacuum(cfg.n_modes())?.apply(&input_preparation(cfg)?)
}

/// The phase-dependent linear part of the interferometer.
///
/// Single arm: a rotation by `phi`. Two arm: beamsplitter, `+phi` on the first arm and
/// `-phi` on the second, beamsplitter again.
pub fn phase_section(topology: Topology, phi: f64) -> Result<SymplecticTransform> {
    match topology {
        Topology::SingleArm => SymplecticTransform::rotation(1, 0, phi),
        Topology::TwoArm => {
            let bs = SymplecticTransform::beamsplitter(2, 0, 1)?;
            bs.then(&SymplecticTransform::rotation(2, 0, phi)?)?
                .then(&SymplecticTransform::rotation(2, 1, -phi)?)?
                .then(&bs)
        }
    }
}

/// `d/dphi` of the matrix of [`phase_section`].
pub fn phase_section_derivative(topology: Topology, phi: f64) -> Result<DMatrix<f64>> {
    let rot_derivative = |sign: f64| {
        let (s, c) = (sign * phi).sin_cos();
        // d/dphi [[c, s], [-s, c]] evaluated at angle sign*phi
        DMatrix::from_row_slice(2, 2, &[-s, c, -c, -s]) * sign
    };
    match topology {
        Topology::SingleArm => Ok(rot_derivative(1.0)),
        Topology::TwoArm => {
            let bs = SymplecticTransform::beamsplitter(2, 0, 1)?;
            let mut inner = DMatrix::zeros(4, 4);
            inner.view_mut((0, 0), (2, 2)).copy_from(&rot_derivative(1.0));
            inner.view_mut((2, 2), (2, 2)).copy_from(&rot_derivative(-1.0));
            Ok(bs.matrix() * inner * bs.matrix())
        }
    }
}

/// Output state at `cfg.phi`.
pub fn output_state(cfg: &InterferometerConfig) -> Result<GaussianState> {
    input_state(cfg)?.apply(&phase_section(cfg.topology, cfg.phi)?)
}

pub fn mean_probe_photons(cfg: &InterferometerConfig) -> Result<PhotonBudget> {
    let cfg = cfg.validated()?;
    let n = cfg.alpha.powi(2)
        + cfg.squeeze.sinh().powi(2)
        + match cfg.topology {
            Topology::SingleArm => 0.0,
            Topology::TwoArm => cfg.bright_squeeze.sinh().powi(2),
        };
    PhotonBudget::new(n)
}

/// The phase-shift generator: `N` for one arm, `N_- = a1^dag a2 + a2^dag a1 = x1 x2 + p1 p2`
/// (the arm photon-number difference written in port quadratures) for two arms.
pub fn phase_generator(topology: Topology) -> Result<QuadraticObservable> {
    match topology {
        Topology::SingleArm => QuadraticObservable::photon_number(1, 0),
        Topology::TwoArm => Ok(QuadraticObservable::zero(2)?
            .with_quadratic(x_index(0), x_index(1), 0.5)
            .with_quadratic(p_index(0), p_index(1), 0.5)),
    }
}

/// Generator variance from the Gaussian moment engine; `None` when it is zero up to rounding.
pub fn generator_variance(cfg: &InterferometerConfig) -> Result<Option<f64>> {
    let gen = phase_generator(cfg.topology)?;
    let (m, scale) = quadratic_moments_with_scale(&output_state(cfg)?, &gen)?;
    if m.variance <= 1e-14 * scale {
        Ok(None)
    } else {
        Ok(Some(m.variance))
    }
}

/// Closed-form generator variance: `alpha^2 e^{2r} + sinh^2(2r)/2` (one arm),
/// `alpha^2 e^{2r} + sinh^2(R + r)` (two arms).
pub fn generator_variance_closed_form(cfg: &InterferometerConfig) -> f64 {
    let a2 = cfg.alpha * cfg.alpha;
    let r = cfg.squeeze;
    match cfg.topology {
        Topology::SingleArm => a2 * (2.0 * r).exp() + 0.5 * (2.0 * r).sinh().powi(2),
        Topology::TwoArm => a2 * (2.0 * r).exp() + (cfg.bright_squeeze + r).sinh().powi(2),
    }
}

/// Quantum Cramer-Rao bound `1 / (4 Var(G))` for the pure probe under `e^{-i G phi}`.
pub fn qcrb(cfg: &InterferometerConfig) -> Result<PhaseBound> {
    Ok(match generator_variance(cfg)? {
        Some(v) => PhaseBound::Finite(1.0 / (4.0 * v)),
        None => PhaseBound::NoInformation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::photon_stats;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn coherent_single_arm_unrotated() {
        let s = output_state(&InterferometerConfig::single_arm(1.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(close(s.mean()[0], SQRT_2, 1e-15));
        assert_eq!(s.mean()[1], 0.0);
        assert_eq!(s.cov(), &(DMatrix::identity(2, 2) * 0.5));
    }

    #[test]
    fn quarter_turn_swaps_quadratures() {
        let s = output_state(&InterferometerConfig::single_arm(0.0, 0.5, FRAC_PI_2).unwrap())
            .unwrap();
        assert!(close(s.cov()[(0, 0)], 0.183940, 1e-6));
        assert!(close(s.cov()[(1, 1)], 1.359141, 1e-6));
    }

    #[test]
    fn two_arm_dark_fringe_values() {
        let s = output_state(&InterferometerConfig::two_arm(1.0, 0.0, 0.3, 0.0).unwrap()).unwrap();
        assert!(close(s.cov()[(3, 3)], 0.274406, 1e-6));
        assert!(close(s.mean()[0], SQRT_2, 1e-14));
    }

    #[test]
    fn dark_fringe_reproduces_inputs() {
        let cfg = InterferometerConfig::two_arm(1.3, -0.4, 0.7, 0.0).unwrap();
        let out = output_state(&cfg).unwrap();
        let inp = input_state(&cfg).unwrap();
        assert!(max_diff(out.cov(), inp.cov()) < 1e-12);
        assert!((out.mean() - inp.mean()).abs().max() < 1e-12);
    }

    /// Entrywise comparison with the quadrature input-output relations.
    #[test]
    fn output_matches_io_relations() {
        let (alpha, big_r, r, phi) = (1.1_f64, 0.35_f64, 0.6_f64, 0.27_f64);
        let (s, c) = phi.sin_cos();

        // single arm: rows are coefficients of (x, p) and the constant term
        let single = output_state(&InterferometerConfig::single_arm(alpha, r, phi).unwrap()).unwrap();
        let lin1 = DMatrix::from_row_slice(2, 2, &[r.exp() * c, (-r).exp() * s, -r.exp() * s, (-r).exp() * c]);
        let cov1 = &lin1 * lin1.transpose() * 0.5;
        assert!(max_diff(single.cov(), &cov1) < 1e-13);
        assert!(close(single.mean()[0], SQRT_2 * alpha * c, 1e-14));
        assert!(close(single.mean()[1], -SQRT_2 * alpha * s, 1e-14));

        // two arm: columns (x1, p1, x2, p2)
        let two = output_state(&InterferometerConfig::two_arm(alpha, big_r, r, phi).unwrap()).unwrap();
        let (er, em_r, e_big, em_big) = (r.exp(), (-r).exp(), big_r.exp(), (-big_r).exp());
        #[rustfmt::skip]
        let lin2 = DMatrix::from_row_slice(4, 4, &[
            e_big * c, 0.0,         0.0,       em_r * s,
            0.0,       em_big * c, -er * s,    0.0,
            0.0,       em_big * s,  er * c,    0.0,
           -e_big * s, 0.0,         0.0,       em_r * c,
        ]);
        let cov2 = &lin2 * lin2.transpose() * 0.5;
        assert!(max_diff(two.cov(), &cov2) < 1e-13);
        let expected_mean = [SQRT_2 * alpha * c, 0.0, 0.0, -SQRT_2 * alpha * s];
        for (k, e) in expected_mean.iter().enumerate() {
            assert!((two.mean()[k] - e).abs() < 1e-14, "mean[{k}]");
        }
    }

    #[test]
    fn phase_derivative_matches_finite_difference() {
        for topology in [Topology::SingleArm, Topology::TwoArm] {
            let phi = 0.41;
            let h = 1e-5;
            let fd = (phase_section(topology, phi + h).unwrap().matrix()
                - phase_section(topology, phi - h).unwrap().matrix())
                / (2.0 * h);
            let exact = phase_section_derivative(topology, phi).unwrap();
            assert!(max_diff(&fd, &exact) < 1e-9);
        }
    }

    #[test]
    fn mean_photon_examples() {
        let single = InterferometerConfig::single_arm(2.0, 0.5, 0.0).unwrap();
        assert!(close(mean_probe_photons(&single).unwrap().value(), 4.271540, 1e-6));
        let two = InterferometerConfig::two_arm(2.0, 0.0, 0.5, 0.0).unwrap();
        assert!(close(mean_probe_photons(&two).unwrap().value(), 4.271540, 1e-6));
        let dark = InterferometerConfig::two_arm(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(mean_probe_photons(&dark).unwrap().value(), 0.0);
    }

    #[test]
    fn mean_photons_match_moment_engine() {
        let cfg = InterferometerConfig::two_arm(1.5, -0.3, 0.8, 0.2).unwrap();
        let out = output_state(&cfg).unwrap();
        let total = photon_stats(&out, 0).unwrap().mean + photon_stats(&out, 1).unwrap().mean;
        assert!(close(total, mean_probe_photons(&cfg).unwrap().value(), 1e-13));
    }

    #[test]
    fn qcrb_single_arm_squeezed_vacuum() {
        let r = 10f64.sqrt().asinh();
        let b = qcrb(&InterferometerConfig::single_arm(0.0, r, 0.0).unwrap()).unwrap();
        assert!(close(b.finite().unwrap(), 1.0 / 880.0, 1e-12));
    }

    #[test]
    fn qcrb_two_arm_antisymmetric() {
        let r = (25.0f64 / 11.0).sqrt().asinh();
        let alpha = (60.0f64 / 11.0).sqrt();
        let cfg = InterferometerConfig::two_arm(alpha, -r, r, 0.0).unwrap();
        assert!(close(mean_probe_photons(&cfg).unwrap().value(), 10.0, 1e-12));
        assert!(close(qcrb(&cfg).unwrap().finite().unwrap(), 1.0 / 240.0, 1e-12));
    }

    #[test]
    fn qcrb_vacuum_is_no_information() {
        for cfg in [
            InterferometerConfig::single_arm(0.0, 0.0, 0.3).unwrap(),
            InterferometerConfig::two_arm(0.0, 0.0, 0.0, 0.3).unwrap(),
        ] {
            assert_eq!(qcrb(&cfg).unwrap(), PhaseBound::NoInformation);
        }
    }

    #[test]
    fn generator_variance_matches_closed_form_on_grid() {
        for &alpha in &[0.0, 0.5, 2.0] {
            for &r in &[0.0, 0.4, 1.2] {
                for &big_r in &[-0.8, 0.0, 0.5] {
                    for &phi in &[0.0, 0.3] {
                        let cfgs = [
                            InterferometerConfig::single_arm(alpha, r, phi).unwrap(),
                            InterferometerConfig::two_arm(alpha, big_r, r, phi).unwrap(),
                        ];
                        for cfg in cfgs {
                            let closed = generator_variance_closed_form(&cfg);
                            match generator_variance(&cfg).unwrap() {
                                Some(v) => assert!(close(v, closed, 1e-10), "{cfg:?}"),
                                None => assert!(closed < 1e-12),
                            }
                        }
                    }
                }
            }
        }
    }

    /// `N_-` in the arm basis, `(n_b1 - n_b2)`, has the same variance as the port form.
    #[test]
    fn arm_basis_generator_agrees() {
        let cfg = InterferometerConfig::two_arm(1.2, 0.3, 0.9, 0.0).unwrap();
        let arms = input_state(&cfg)
            .unwrap()
            .apply(&SymplecticTransform::beamsplitter(2, 0, 1).unwrap())
            .unwrap();
        let arm_gen = QuadraticObservable::photon_number(2, 0)
            .unwrap()
            .combine(1.0, &QuadraticObservable::photon_number(2, 1).unwrap(), -1.0)
            .unwrap();
        let v = crate::gaussian::quadratic_moments(&arms, &arm_gen).unwrap().variance;
        assert!(close(v, generator_variance_closed_form(&cfg), 1e-12));
    }

    #[test]
    fn config_guards() {
        assert!(InterferometerConfig::single_arm(-1.0, 0.0, 0.0).is_err());
        assert!(InterferometerConfig::two_arm(1.0, 21.0, 0.0, 0.0).is_err());
        assert!(InterferometerConfig::single_arm(1.0, -25.0, 0.0).is_err());
        assert!(InterferometerConfig::single_arm(f64::NAN, 0.0, 0.0).is_err());
        let bad = InterferometerConfig {
            topology: Topology::SingleArm,
            alpha: 1.0,
            squeeze: 0.0,
            bright_squeeze: 0.5,
            phi: 0.0,
        };
        assert!(bad.validated().is_err());
        assert!(PhotonBudget::new(-0.1).is_err());
    }
}
