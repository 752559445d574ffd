//! Phase sensitivity of interferometers probed by squeezed coherent light.
//!
//! The analytic engine works with Gaussian states (means and covariances, vacuum
//! variance 1/2, quadratures ordered `x1, p1, x2, p2`). The [`fock`] module rebuilds
//! the same optics by brute force in a truncated photon-number basis and is used to
//! check the analytic results.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod numeric;
pub mod sensitivity;

#[cfg(test)]
mod proptests;

pub use detection::{DetectionScheme, ErrorPoint, PhaseEstimate};
pub use error::{Error, Result};
pub use gaussian::{GaussianState, Moments, QuadraticObservable, SymplecticTransform};
pub use interferometer::{InterferometerConfig, PhaseBound, PhotonBudget, Topology};
pub use sensitivity::{FigureOfMerit, OptimizedSetup, Regime, SensitivityCurve};
