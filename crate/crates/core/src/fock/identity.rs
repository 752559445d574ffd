use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{
    check_dim, displacement_real, moments, phase_generator, squeeze_real, FockObservable,
    FockState, I,
};
use crate::detection::threshold_observable;
use crate::error::{Error, Result};
use crate::gaussian::QuadraticObservable;
use crate::interferometer::{InterferometerConfig, Topology};

/// Tail mass the state must have at the requested truncation.
const IDENTITY_TAIL: f64 = 1e-12;
/// Tail mass required of the working truncation. The residual is an amplitude, so the
/// tail has to be small on the amplitude scale, i.e. its square.
const WORKING_TAIL: f64 = 1e-24;
/// Largest working truncation, as a multiple of the requested one.
const MAX_PADDING: usize = 8;

/// How well the threshold operator `Y` satisfies `<psi_0|Y|psi_l> = 2i <psi_0|G|psi_l>`
/// on the rotated basis `|psi_l> = V|l>`, `l != 0`, together with `<psi_0|Y|psi_0> = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    /// `max_l |<l|V^T (Y + 2iG)|psi_0>| + |<Y>|`.
    pub residual: f64,
    /// Basis states `l <= 0.8 dim` are checked.
    pub dim: usize,
    /// Truncation the operators were actually built at.
    pub working_dim: usize,
    /// Tail of `psi_0` at `dim`.
    pub tail_mass: f64,
    /// `Var(Y)` on `psi_0`.
    pub variance_y: f64,
    /// `4 Var(G)` on `psi_0`, equal to `Var(Y)` when the identity holds.
    pub four_variance_g: f64,
}

/// Checks the defining equation of the threshold operator with ladder-matrix algebra.
///
/// Only basis states `l <= 0.8 D` enter the maximum. The operators are built on a larger
/// working truncation, doubled from `D` until the amplitude tail is negligible, because
/// a probability tail of `1e-12` still leaves amplitudes of `1e-6` at the edge.
pub fn threshold_identity_residual(cfg: &InterferometerConfig, dim: usize) -> Result<IdentityResidual> {
    let cfg = cfg.validated()?.with_phi(0.0);
    residual_for(&cfg, &threshold_observable(&cfg)?, dim)
}

fn residual_for(
    cfg: &InterferometerConfig,
    y: &QuadraticObservable,
    dim: usize,
) -> Result<IdentityResidual> {
    check_dim(dim)?;
    let tail_mass = rotated_vacuum(cfg, dim)?.1.tail_mass();
    if tail_mass >= IDENTITY_TAIL {
        return Err(Error::Truncation {
            dim,
            tail: tail_mass,
            suggested: 2 * dim,
        });
    }
    let mut work = dim;
    loop {
        let tail = rotated_vacuum(cfg, work)?.1.tail_mass();
        if tail < WORKING_TAIL {
            break;
        }
        if 2 * work > MAX_PADDING * dim {
            return Err(Error::Truncation {
                dim: work,
                tail,
                suggested: 2 * work,
            });
        }
        work *= 2;
    }
    let mut res = residual_at(cfg, y, dim, work)?;
    res.tail_mass = tail_mass;
    Ok(res)
}

type Rotation = (DMatrix<f64>, Option<DMatrix<f64>>);

/// `V` and `psi_0 = V|0>` at truncation `dim`.
fn rotated_vacuum(cfg: &InterferometerConfig, dim: usize) -> Result<(Rotation, FockState)> {

    let (v1, v2) = match cfg.topology {
        Topology::SingleArm => (
            displacement_real(cfg.alpha, dim) * squeeze_real(cfg.squeeze, dim),
            None,
        ),
        Topology::TwoArm => (
            displacement_real(cfg.alpha, dim) * squeeze_real(cfg.bright_squeeze, dim),
            Some(squeeze_real(cfg.squeeze, dim)),
        ),
    };
    let col = |m: &DMatrix<f64>| m.column(0).map(C64::from);
    let psi0 = match &v2 {
        None => FockState::new(dim, 1, col(&v1))?,
        Some(v2) => FockState::from_grid(&(col(&v1) * col(v2).transpose())),
    };
    Ok(((v1, v2), psi0))
}

fn residual_at(
    cfg: &InterferometerConfig,
    y: &QuadraticObservable,
    checked: usize,
    dim: usize,
) -> Result<IdentityResidual> {
    let limit = (0.8 * checked as f64).floor() as usize;
    let ((v1, v2), psi0) = rotated_vacuum(cfg, dim)?;
    let y = FockObservable::from_quadratic(y, dim)?;
    let g = phase_generator(cfg.topology, dim)?;
    let y_psi = y.apply(&psi0)?;
    let g_psi = g.apply(&psi0)?;
    let combined: DVector<C64> = y_psi.amplitudes() + g_psi.amplitudes() * (I * 2.0);

    let worst = match &v2 {
        None => {
            let w = v1.map(C64::from).transpose() * combined;
            (1..=limit.min(dim - 1)).map(|l| w[l].norm()).fold(0.0, f64::max)
        }
        Some(v2) => {
            // (V1 (x) V2)^T v  is  V1^T Psi V2 on the grid
            let psi = FockState::new(dim, 2, combined)?.as_grid();
            let w = v1.map(C64::from).transpose() * psi * v2.map(C64::from);
            let top = limit.min(dim - 1);
            let mut worst = 0.0_f64;
            for l1 in 0..=top {
                for l2 in 0..=top {
                    if (l1, l2) != (0, 0) {
                        worst = worst.max(w[(l1, l2)].norm());
                    }
                }
            }
            worst
        }
    };
    let my = moments(&psi0, &y)?;
    let mg = moments(&psi0, &g)?;
    Ok(IdentityResidual {
        residual: worst + my.mean.abs(),
        dim: checked,
        working_dim: dim,
        tail_mass: psi0.tail_mass(),
        variance_y: my.variance,
        four_variance_g: 4.0 * mg.variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arm_identity_holds() {
        for (alpha, r) in [(0.0, 0.8), (1.5, 0.5), (2.0, 0.0)] {
            let cfg = InterferometerConfig::single_arm(alpha, r, 0.0).unwrap();
            let res = threshold_identity_residual(&cfg, 80).unwrap();
            assert!(res.residual < 1e-9, "{alpha} {r}: {res:?}");
            assert!((res.variance_y - res.four_variance_g).abs() < 1e-8 * res.variance_y);
        }
    }

    #[test]
    fn two_arm_identity_holds() {
        for (alpha, big_r, r) in [(1.0, 0.0, 0.5), (1.0, -0.4, 0.4), (0.8, 0.3, 0.2)] {
            let cfg = InterferometerConfig::two_arm(alpha, big_r, r, 0.0).unwrap();
            let res = threshold_identity_residual(&cfg, 40).unwrap();
            assert!(res.residual < 1e-9, "{alpha} {big_r} {r}: {res:?}");
        }
    }

    #[test]
    fn wrong_operator_fails_the_identity() {
        let cfg = InterferometerConfig::single_arm(1.0, 0.5, 0.0).unwrap();
        let y = threshold_observable(&cfg).unwrap();
        let flipped = y.combine(-1.0, &y, 0.0).unwrap();
        assert!(residual_for(&cfg, &flipped, 60).unwrap().residual > 1e-2);
        let cfg2 = InterferometerConfig::single_arm(1.0, 0.6, 0.0).unwrap();
        assert!(residual_for(&cfg2, &y, 60).unwrap().residual > 1e-3);
    }

    #[test]
    fn small_truncation_is_reported() {
        let cfg = InterferometerConfig::single_arm(3.0, 0.5, 0.0).unwrap();
        assert!(matches!(
            threshold_identity_residual(&cfg, 10),
            Err(Error::Truncation { .. })
        ));
    }
}
