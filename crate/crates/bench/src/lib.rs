//! Shared inputs for the benchmarks in `benches/`.

use sqzphase::sensitivity::{optimize_displacement, OptimizedSetup};
use sqzphase::{DetectionScheme, InterferometerConfig, PhotonBudget, Regime};

/// Optimized two-arm `R = 0` threshold setup, the one case without a closed-form optimum.
pub fn r0_threshold_setup(n: f64) -> OptimizedSetup {
    optimize_displacement(PhotonBudget::new(n).unwrap(), Regime::TwoArmR0, DetectionScheme::Threshold).unwrap()
}

/// A moderately squeezed two-arm configuration that the Fock model handles at `D = 40`.
pub fn two_arm_fixture() -> InterferometerConfig {
    InterferometerConfig::two_arm(1.0, 0.2, 0.3, 0.35).unwrap()
}
