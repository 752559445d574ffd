//! Brute-force truncated Fock-space model of the same optics.
//!
//! Everything here is built from ladder matrices and matrix exponentials, with no use of
//! Gaussian moment formulas, so it can serve as ground truth for the analytic engine.
//! Two-mode amplitudes are stored row-major, index `n1 * D + n2`.

mod identity;
mod two_mode;
pub mod verify;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gaussian::{Moments, QuadraticObservable};
use crate::interferometer::{InterferometerConfig, Topology};

pub use identity::{threshold_identity_residual, IdentityResidual};
pub use two_mode::{complete_sector_distance, TwoModeEvolver, TwoModeOperator};

/// Tail mass above which a prepared or evolved state is rejected.
pub const TAIL_LIMIT: f64 = 1e-10;
/// Default single-mode truncation.
pub const DEFAULT_DIM_SINGLE: usize = 80;
/// Default per-mode truncation for two modes.
pub const DEFAULT_DIM_TWO: usize = 30;

const I: C64 = C64::new(0.0, 1.0);

/// Single-mode operator on the truncated space `span{|0>, ..., |D-1>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    entries: DMatrix<C64>,
}

impl FockOperator {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        Ok(Self { entries })
    }

    fn from_real(m: DMatrix<f64>) -> Self {
        Self {
            entries: m.map(|v| C64::new(v, 0.0)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.entries - self.entries.adjoint())
            .iter()
            .all(|z| z.norm() <= tol)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            entries: &self.entries * k,
        }
    }

    pub fn add(&self, other: &FockOperator) -> Self {
        Self {
            entries: &self.entries + &other.entries,
        }
    }

    pub fn mul(&self, other: &FockOperator) -> Self {
        Self {
            entries: &self.entries * &other.entries,
        }
    }

    /// `(A B + B A) / 2`.
    pub fn sym_product(&self, other: &FockOperator) -> Self {
        Self {
            entries: (&self.entries * &other.entries + &other.entries * &self.entries) * C64::new(0.5, 0.0),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 4 {
        return Err(Error::Precondition(format!("Fock truncation must be >= 4, got {dim}")));
    }
    Ok(())
}

fn ladder_real(dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// Annihilation operator: `sqrt(n)` on the first superdiagonal.
pub fn ladder(dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    Ok(FockOperator::from_real(ladder_real(dim)))
}

pub fn number(dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    Ok(FockOperator::from_real(DMatrix::from_diagonal(&DVector::from_fn(
        dim,
        |n, _| n as f64,
    ))))
}

/// `x = (a + a^dag)/sqrt(2)`.
pub fn position(dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    let a = ladder_real(dim);
    Ok(FockOperator::from_real((&a + a.transpose()) * std::f64::consts::FRAC_1_SQRT_2))
}

/// `p = (a - a^dag)/(i sqrt(2))`.
pub fn momentum(dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    let a = ladder_real(dim);
    let diff = (&a - a.transpose()).map(|v| C64::new(v, 0.0));
    Ok(FockOperator {
        entries: diff * (-I * std::f64::consts::FRAC_1_SQRT_2),
    })
}

/// Truncated `e^{alpha (a^dag - a)}` as a real orthogonal matrix.
pub(crate) fn displacement_real(alpha: f64, dim: usize) -> DMatrix<f64> {
    let a = ladder_real(dim);
    ((a.transpose() - a) * alpha).exp()
}

/// Truncated `e^{r (a^dag^2 - a^2)/2}` as a real orthogonal matrix.
pub(crate) fn squeeze_real(r: f64, dim: usize) -> DMatrix<f64> {
    let a = ladder_real(dim);
    let a2 = &a * &a;
    ((a2.transpose() - a2) * (0.5 * r)).exp()
}

pub fn displacement(alpha: f64, dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    Ok(FockOperator::from_real(displacement_real(alpha, dim)))
}

pub fn squeeze(r: f64, dim: usize) -> Result<FockOperator> {
    check_dim(dim)?;
    Ok(FockOperator::from_real(squeeze_real(r, dim)))
}

/// Pure state in a truncated one- or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dim: usize,
    n_modes: usize,
    amplitudes: DVector<C64>,
}

impl FockState {
    pub fn new(dim: usize, n_modes: usize, amplitudes: DVector<C64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = match n_modes {
            1 => dim,
            2 => dim * dim,
            _ => return Err(Error::Precondition(format!("{n_modes} modes not supported"))),
        };
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            dim,
            n_modes,
            amplitudes,
        })
    }

    pub fn vacuum(dim: usize, n_modes: usize) -> Result<Self> {
        let len = if n_modes == 2 { dim * dim } else { dim };
        let mut amps = DVector::zeros(len);
        amps[0] = C64::new(1.0, 0.0);
        Self::new(dim, n_modes, amps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Probability carried by basis states in the top 10% of any mode's ladder.
    pub fn tail_mass(&self) -> f64 {
        let cut = tail_cut(self.dim);
        match self.n_modes {
            1 => self.amplitudes.rows(cut, self.dim - cut).norm_squared(),
            _ => self
                .amplitudes
                .iter()
                .enumerate()
                .filter(|(k, _)| k / self.dim >= cut || k % self.dim >= cut)
                .map(|(_, z)| z.norm_sqr())
                .sum(),
        }
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &FockState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }

    /// The amplitude grid `Psi[n1][n2]` of a two-mode state.
    pub(crate) fn as_grid(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, self.amplitudes.as_slice())
    }

    pub(crate) fn from_grid(grid: &DMatrix<C64>) -> Self {
        let dim = grid.nrows();
        let amplitudes = DVector::from_iterator(dim * dim, grid.transpose().iter().copied());
        Self {
            dim,
            n_modes: 2,
            amplitudes,
        }
    }

    fn checked(self) -> Result<Self> {
        let tail = self.tail_mass();
        if tail >= TAIL_LIMIT {
            return Err(Error::Truncation {
                dim: self.dim,
                tail,
                suggested: 2 * self.dim,
            });
        }
        Ok(self)
    }
}

pub(crate) fn tail_cut(dim: usize) -> usize {
    dim - dim.div_ceil(10)
}

fn real_column_zero(m: &DMatrix<f64>) -> DVector<C64> {
    m.column(0).map(|v| C64::new(v, 0.0))
}

/// Input state `D(alpha) S(r) |0>` (one arm) or `D1(alpha) S1(R) S2(r) |0,0>` (two arms).
pub fn prepare(cfg: &InterferometerConfig, dim: usize) -> Result<FockState> {
    check_dim(dim)?;
    let cfg = cfg.validated()?;
    let state = match cfg.topology {
        Topology::SingleArm => {
            let v = displacement_real(cfg.alpha, dim) * squeeze_real(cfg.squeeze, dim);
            FockState::new(dim, 1, real_column_zero(&v))?
        }
        Topology::TwoArm => {
            let bright = displacement_real(cfg.alpha, dim) * squeeze_real(cfg.bright_squeeze, dim);
            let dark = squeeze_real(cfg.squeeze, dim);
            let grid = real_column_zero(&bright) * real_column_zero(&dark).transpose();
            FockState::from_grid(&grid)
        }
    };
    state.checked()
}

/// Apply the phase shift `e^{-i N phi}` (one arm) or `e^{-i N_- phi}` (two arms),
/// the latter by exponentiating `N_- = a1^dag a2 + a2^dag a1` in the port basis.
pub fn evolve_phase(state: &FockState, cfg: &InterferometerConfig) -> Result<FockState> {
    match cfg.topology {
        Topology::SingleArm => {
            if state.n_modes != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: state.n_modes,
                });
            }
            let amps = DVector::from_fn(state.dim, |n, _| {
                state.amplitudes[n] * C64::from_polar(1.0, -(n as f64) * cfg.phi)
            });
            FockState::new(state.dim, 1, amps)?.checked()
        }
        Topology::TwoArm => TwoModeEvolver::new(state.dim)?.evolve(state, cfg.phi)?.checked(),
    }
}

/// Prepared and phase-shifted state at `cfg.phi`.
pub fn output(cfg: &InterferometerConfig, dim: usize) -> Result<FockState> {
    evolve_phase(&prepare(cfg, dim)?, cfg)
}

/// Doubles the truncation from `start_dim` until both the input and the output tails
/// are below `tail_target`.
pub fn converged_output(
    cfg: &InterferometerConfig,
    start_dim: usize,
    tail_target: f64,
    max_dim: usize,
) -> Result<FockState> {
    let mut dim = start_dim.max(4);
    loop {
        let attempt = prepare(cfg, dim).and_then(|s| {
            let tail_in = s.tail_mass();
            let out = evolve_phase(&s, cfg)?;
            Ok((tail_in.max(out.tail_mass()), out))
        });
        match attempt {
            Ok((tail, out)) if tail < tail_target => return Ok(out),
            Ok((tail, _)) => {
                if 2 * dim > max_dim {
                    return Err(Error::Truncation {
                        dim,
                        tail,
                        suggested: 2 * dim,
                    });
                }
            }
            Err(Error::Truncation { .. }) if 2 * dim <= max_dim => {}
            Err(e) => return Err(e),
        }
        dim *= 2;
    }
}

/// An operator the oracle can apply to a state.
#[derive(Debug, Clone)]
pub enum FockObservable {
    Single(FockOperator),
    TwoMode(TwoModeOperator),
}

impl FockObservable {
    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        match self {
            FockObservable::Single(op) => {
                if state.n_modes != 1 || op.dim() != state.dim {
                    return Err(Error::DimensionMismatch {
                        expected: state.dim,
                        found: op.dim(),
                    });
                }
                FockState::new(state.dim, 1, &op.entries * &state.amplitudes)
            }
            FockObservable::TwoMode(op) => op.apply(state),
        }
    }

    /// Builds `c0 + c.q + q^T M q` from truncated quadrature matrices.
    pub fn from_quadratic(obs: &QuadraticObservable, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let x = position(dim)?;
        let p = momentum(dim)?;
        let c = obs.linear();
        let m = obs.quadratic();
        match obs.n_modes() {
            1 => {
                let quad = [&x, &p];
                let mut acc = FockOperator::identity(dim).scale(C64::from(obs.constant()));
                for i in 0..2 {
                    acc = acc.add(&quad[i].scale(C64::from(c[i])));
                    for j in 0..2 {
                        if m[(i, j)] != 0.0 {
                            acc = acc.add(&quad[i].sym_product(quad[j]).scale(C64::from(m[(i, j)])));
                        }
                    }
                }
                Ok(FockObservable::Single(acc))
            }
            2 => Ok(FockObservable::TwoMode(TwoModeOperator::from_quadratic(obs, &x, &p)?)),
            n => Err(Error::Precondition(format!("{n}-mode observables not supported"))),
        }
    }
}

/// `<O>` and `<(O - <O>)^2>` by direct matrix sandwiches.
pub fn moments(state: &FockState, op: &FockObservable) -> Result<Moments> {
    let applied = op.apply(state)?;
    let mean = state.amplitudes.dotc(&applied.amplitudes).re;
    let centered = &applied.amplitudes - &state.amplitudes * C64::from(mean);
    Ok(Moments {
        mean,
        variance: centered.norm_squared(),
    })
}

/// `N` (one mode) or `N1 + N2` (two modes).
pub fn total_number(dim: usize, n_modes: usize) -> Result<FockObservable> {
    Ok(match n_modes {
        1 => FockObservable::Single(number(dim)?),
        _ => FockObservable::TwoMode(TwoModeOperator::total_number(dim)?),
    })
}

/// The phase-shift generator of the topology, built from ladder matrices.
pub fn phase_generator(topology: Topology, dim: usize) -> Result<FockObservable> {
    Ok(match topology {
        Topology::SingleArm => FockObservable::Single(number(dim)?),
        Topology::TwoArm => FockObservable::TwoMode(TwoModeOperator::number_difference(dim)?),
    })
}
