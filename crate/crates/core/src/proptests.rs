//! Randomized invariants across the public API.

use proptest::prelude::*;

use crate::detection::{gain, gain_finite_difference, observable, phase_error};
use crate::fock::{self, FockObservable};
use crate::gaussian::{photon_stats, quadratic_moments, symplectic_deviation};
use crate::interferometer::{mean_probe_photons, output_state, phase_generator, qcrb};
use crate::sensitivity::Regime;
use crate::{DetectionScheme, GaussianState, InterferometerConfig, SymplecticTransform};

#[derive(Debug, Clone)]
enum Step {
    Displace(usize, f64),
    Squeeze(usize, f64),
    Rotate(usize, f64),
    Split,
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0..2usize, -3.0..3.0f64).prop_map(|(m, a)| Step::Displace(m, a)),
        (0..2usize, -1.2..1.2f64).prop_map(|(m, r)| Step::Squeeze(m, r)),
        (0..2usize, -3.2..3.2f64).prop_map(|(m, p)| Step::Rotate(m, p)),
        Just(Step::Split),
    ]
}

fn transform(s: &Step) -> SymplecticTransform {
    match *s {
        Step::Displace(m, a) => SymplecticTransform::displacement(2, m, a),
        Step::Squeeze(m, r) => SymplecticTransform::squeeze(2, m, r),
        Step::Rotate(m, p) => SymplecticTransform::rotation(2, m, p),
        Step::Split => SymplecticTransform::beamsplitter(2, 0, 1),
    }
    .unwrap()
}

fn scheme() -> impl Strategy<Value = DetectionScheme> {
    prop_oneof![Just(DetectionScheme::Homodyne), Just(DetectionScheme::Threshold)]
}

fn any_config() -> impl Strategy<Value = InterferometerConfig> {
    prop_oneof![
        (0.0..3.0f64, -1.0..1.0f64, -0.7..0.7f64)
            .prop_map(|(a, r, phi)| InterferometerConfig::single_arm(a, r, phi).unwrap()),
        (0.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64, -0.7..0.7f64)
            .prop_map(|(a, big_r, r, phi)| InterferometerConfig::two_arm(a, big_r, r, phi).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compositions_stay_symplectic_and_pure(steps in prop::collection::vec(step(), 1..12)) {
        let mut total = SymplecticTransform::identity(2).unwrap();
        for s in &steps {
            total = total.then(&transform(s)).unwrap();
        }
        let scale = total.matrix().abs().max().powi(2).max(1.0);
        prop_assert!(symplectic_deviation(total.matrix()) < 1e-12 * scale);

        let state = GaussianState::vacuum(2).unwrap().apply(&total).unwrap();
        prop_assert!((state.purity_determinant() - 1.0).abs() < 1e-9 * scale);

        let stepwise = steps.iter().fold(GaussianState::vacuum(2).unwrap(), |st, s| st.apply(&transform(s)).unwrap());
        let diff = (stepwise.cov() - state.cov()).abs().max();
        prop_assert!(diff < 1e-10 * scale);
    }

    #[test]
    fn error_never_beats_the_quantum_bound(cfg in any_config(), scheme in scheme()) {
        let bound = qcrb(&cfg).unwrap().finite();
        if let (Some(bound), Some(d)) = (bound, phase_error(&cfg, scheme).unwrap().dphi_sq()) {
            prop_assert!(d >= bound * (1.0 - 1e-9), "{d} < {bound}");
        }
    }

    #[test]
    fn generator_variance_does_not_depend_on_phase(cfg in any_config(), shift in -1.0..1.0f64) {
        let g = phase_generator(cfg.topology).unwrap();
        let a = quadratic_moments(&output_state(&cfg).unwrap(), &g).unwrap();
        let b = quadratic_moments(&output_state(&cfg.with_phi(cfg.phi + shift)).unwrap(), &g).unwrap();
        prop_assert!((a.variance - b.variance).abs() <= 1e-9 * a.variance.max(1.0));
    }

    #[test]
    fn analytic_gain_matches_finite_difference(cfg in any_config(), scheme in scheme()) {
        let obs = observable(&cfg.with_phi(0.0), scheme).unwrap();
        let exact = gain(&cfg, &obs).unwrap().value;
        let numeric = gain_finite_difference(&cfg, &obs).unwrap();
        prop_assert!((exact - numeric).abs() <= 1e-7 * exact.abs().max(1.0));
    }

    #[test]
    fn budget_split_is_respected(n in 0.0..500.0f64, frac in 0.0..1.0f64, regime in prop_oneof![
        Just(Regime::SingleArm), Just(Regime::TwoArmR0), Just(Regime::TwoArmAnti)
    ]) {
        let cfg = regime.config(frac * n, n, 0.0).unwrap();
        let total = mean_probe_photons(&cfg).unwrap().value();
        prop_assert!((total - n).abs() <= 1e-9 * n.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_photon_statistics_match_gaussian(a in 0.0..2.0f64, r in -0.6..0.6f64, phi in -0.7..0.7f64) {
        let cfg = InterferometerConfig::single_arm(a, r, phi).unwrap();
        let state = fock::output(&cfg, 80).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-9);
        let n_op = fock::total_number(80, 1).unwrap();
        let f = fock::moments(&state, &n_op).unwrap();
        let g = photon_stats(&output_state(&cfg).unwrap(), 0).unwrap();
        prop_assert!((f.mean - g.mean).abs() <= 1e-9 * g.mean.max(1.0));
        prop_assert!((f.variance - g.variance).abs() <= 1e-9 * g.variance.max(1.0));
    }

    #[test]
    fn fock_threshold_moments_match_gaussian(a in 0.0..1.5f64, big_r in -0.4..0.4f64, r in -0.4..0.4f64, phi in -0.7..0.7f64) {
        let cfg = InterferometerConfig::two_arm(a, big_r, r, phi).unwrap();
        let state = fock::output(&cfg, 40).unwrap();
        let obs = observable(&cfg.with_phi(0.0), DetectionScheme::Threshold).unwrap();
        let f = fock::moments(&state, &FockObservable::from_quadratic(&obs, 40).unwrap()).unwrap();
        let g = quadratic_moments(&output_state(&cfg).unwrap(), &obs).unwrap();
        prop_assert!((f.mean - g.mean).abs() <= 1e-8 * g.mean.abs().max(1.0));
        prop_assert!((f.variance - g.variance).abs() <= 1e-8 * g.variance.max(1.0));
    }
}
