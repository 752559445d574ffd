//! Gaussian states of `n` bosonic modes and their evolution under symplectic maps.
//!
//! Quadratures are interleaved as `(x1, p1, x2, p2, ...)` with `a = (x + ip)/sqrt(2)`,
//! so the vacuum has covariance `I/2`. Covariances are the symmetrized
//! second moments `<{dq_i, dq_j}>/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const SYMPLECTIC_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;

/// Index of the `x` quadrature of `mode` in the interleaved ordering.
#[inline]
pub fn x_index(mode: usize) -> usize {
    2 * mode
}

/// Index of the `p` quadrature of `mode` in the interleaved ordering.
#[inline]
pub fn p_index(mode: usize) -> usize {
    2 * mode + 1
}

/// The symplectic form `Omega = diag(J, ..., J)` with `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(x_index(k), p_index(k))] = 1.0;
        omega[(p_index(k), x_index(k))] = -1.0;
    }
    omega
}

fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
    if mode >= n_modes {
        return Err(Error::ModeOutOfRange { mode, n_modes });
    }
    Ok(())
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, ascending.
///
/// Computed as the square roots of the eigenvalues of `sqrt(V) Omega^T V Omega sqrt(V)`,
/// each of which appears twice.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if !dim.is_multiple_of(2) || cov.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim + dim % 2,
            found: cov.ncols(),
        });
    }
    let eig = SymmetricEigen::new(cov.clone());
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::Unphysical(min_eig));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let omega = symplectic_form(dim / 2);
    let k = &root * omega.transpose() * cov * &omega * &root;
    let mut nu2: Vec<f64> = SymmetricEigen::new(symmetrize(k)).eigenvalues.iter().copied().collect();
    nu2.sort_by(f64::total_cmp);
    Ok(nu2.chunks(2).map(|pair| pair[0].max(0.0).sqrt()).collect())
}

/// Gaussian state: first moments and symmetrized covariance of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry and the uncertainty relation `V + i Omega / 2 >= 0`.
    ///
    /// The eigenvalue check allows `1e-10` plus a rounding allowance proportional to the
    /// condition number of `cov`, which grows as `e^{4r}` for strongly squeezed states.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: dim,
            });
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: cov.nrows().max(cov.ncols()),
            });
        }
        let scale = max_abs(&cov).max(1.0);
        let asym = max_asymmetry(&cov);
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(asym));
        }
        let cov = symmetrize(cov);
        let eig = SymmetricEigen::new(cov.clone());
        let (lo, hi) = (eig.eigenvalues.min(), eig.eigenvalues.max());
        if lo <= 0.0 {
            return Err(Error::Unphysical(lo));
        }
        let allowance = EIGEN_TOL + 1e-14 * hi / lo;
        let nu_min = symplectic_eigenvalues(&cov)?[0];
        if nu_min < 0.5 - allowance {
            return Err(Error::Unphysical(nu_min));
        }
        Ok(Self {
            n_modes: dim / 2,
            mean,
            cov,
        })
    }

    /// `n`-mode vacuum: zero mean, covariance `I/2`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self {
            n_modes,
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Restriction to a single mode (marginal state).
    pub fn mode(&self, mode: usize) -> Result<GaussianState> {
        check_mode(mode, self.n_modes)?;
        let k = x_index(mode);
        Ok(GaussianState {
            n_modes: 1,
            mean: self.mean.rows(k, 2).into_owned(),
            cov: self.cov.view((k, k), (2, 2)).into_owned(),
        })
    }

    /// Evolve under `q -> S q + d`.
    pub fn apply(&self, transform: &SymplecticTransform) -> Result<GaussianState> {
        let dim = 2 * self.n_modes;
        if transform.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: transform.dim(),
            });
        }
        let s = &transform.s;
        Ok(GaussianState {
            n_modes: self.n_modes,
            mean: s * &self.mean + &transform.d,
            cov: symmetrize(s * &self.cov * s.transpose()),
        })
    }

    /// `det(2V)`, equal to one for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }
}

/// Affine symplectic map `q -> S q + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticTransform {
    /// Checks `S Omega S^T = Omega` relative to `max(1, |S|^2)`.
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || s.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.max(2) + dim % 2,
                found: s.ncols(),
            });
        }
        if d.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d.len(),
            });
        }
        let dev = symplectic_deviation(&s);
        let scale = max_abs(&s).max(1.0).powi(2);
        if dev > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(Self { s, d })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        let dim = 2 * n_modes;
        Ok(Self {
            s: DMatrix::identity(dim, dim),
            d: DVector::zeros(dim),
        })
    }

    /// `e^{alpha (a^dag - a)}` on `mode`: shifts `x` by `sqrt(2) alpha`.
    pub fn displacement(n_modes: usize, mode: usize, alpha: f64) -> Result<Self> {
        let mut t = Self::identity(n_modes)?;
        check_mode(mode, n_modes)?;
        t.d[x_index(mode)] = std::f64::consts::SQRT_2 * alpha;
        Ok(t)
    }

    /// `e^{r (a^dag^2 - a^2)/2}` on `mode`: `x -> x e^r`, `p -> p e^{-r}`.
    pub fn squeeze(n_modes: usize, mode: usize, r: f64) -> Result<Self> {
        let mut t = Self::identity(n_modes)?;
        check_mode(mode, n_modes)?;
        t.s[(x_index(mode), x_index(mode))] = r.exp();
        t.s[(p_index(mode), p_index(mode))] = (-r).exp();
        Ok(t)
    }

    /// Phase shift `e^{-i N phi}` on `mode`:
    /// `x -> x cos(phi) + p sin(phi)`, `p -> -x sin(phi) + p cos(phi)`.
    pub fn rotation(n_modes: usize, mode: usize, phi: f64) -> Result<Self> {
        let mut t = Self::identity(n_modes)?;
        check_mode(mode, n_modes)?;
        let (sin, cos) = phi.sin_cos();
        let (x, p) = (x_index(mode), p_index(mode));
        t.s[(x, x)] = cos;
        t.s[(x, p)] = sin;
        t.s[(p, x)] = -sin;
        t.s[(p, p)] = cos;
        Ok(t)
    }

    /// Balanced beamsplitter `B = [[1, 1], [1, -1]] / sqrt(2)` acting on the
    /// `(x_i, x_j)` and `(p_i, p_j)` pairs. Involutory.
    pub fn beamsplitter(n_modes: usize, mode_i: usize, mode_j: usize) -> Result<Self> {
        let mut t = Self::identity(n_modes)?;
        check_mode(mode_i, n_modes)?;
        check_mode(mode_j, n_modes)?;
        if mode_i == mode_j {
            return Err(Error::SameMode(mode_i));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b) in [
            (x_index(mode_i), x_index(mode_j)),
            (p_index(mode_i), p_index(mode_j)),
        ] {
            t.s[(a, a)] = h;
            t.s[(a, b)] = h;
            t.s[(b, a)] = h;
            t.s[(b, b)] = -h;
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn displacement_vector(&self) -> &DVector<f64> {
        &self.d
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &SymplecticTransform) -> Result<SymplecticTransform> {
        if next.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: next.dim(),
            });
        }
        Ok(SymplecticTransform {
            s: &next.s * &self.s,
            d: &next.s * &self.d + &next.d,
        })
    }
}

/// `max |S Omega S^T - Omega|`.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    max_abs(&(s * &omega * s.transpose() - omega))
}

/// `c0 + c^T q + q^T M q`, every product symmetrically ordered.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObservable {
    pub(crate) c0: f64,
    pub(crate) c: DVector<f64>,
    pub(crate) m: DMatrix<f64>,
}

impl QuadraticObservable {
    pub fn new(c0: f64, c: DVector<f64>, m: DMatrix<f64>) -> Result<Self> {
        let dim = c.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim.max(2) + dim % 2,
                found: dim,
            });
        }
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.nrows().max(m.ncols()),
            });
        }
        let asym = max_asymmetry(&m);
        if asym > SYMMETRY_TOL * max_abs(&m).max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { c0, c, m: symmetrize(m) })
    }

    pub fn zero(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        let dim = 2 * n_modes;
        Ok(Self {
            c0: 0.0,
            c: DVector::zeros(dim),
            m: DMatrix::zeros(dim, dim),
        })
    }

    /// The `p` quadrature of `mode`.
    pub fn p_quadrature(n_modes: usize, mode: usize) -> Result<Self> {
        check_mode(mode, n_modes)?;
        Ok(Self::zero(n_modes)?.with_linear(p_index(mode), 1.0))
    }

    /// The `x` quadrature of `mode`.
    pub fn x_quadrature(n_modes: usize, mode: usize) -> Result<Self> {
        check_mode(mode, n_modes)?;
        Ok(Self::zero(n_modes)?.with_linear(x_index(mode), 1.0))
    }

    /// `N = a^dag a = (x^2 + p^2 - 1)/2` of `mode`.
    pub fn photon_number(n_modes: usize, mode: usize) -> Result<Self> {
        check_mode(mode, n_modes)?;
        let (x, p) = (x_index(mode), p_index(mode));
        Ok(Self::zero(n_modes)?
            .with_constant(-0.5)
            .with_quadratic(x, x, 0.5)
            .with_quadratic(p, p, 0.5))
    }

    pub fn with_constant(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn with_linear(mut self, index: usize, value: f64) -> Self {
        self.c[index] = value;
        self
    }

    /// Sets `M_ij = M_ji = value`; for `i != j` this contributes `2 value (q_i o q_j)`.
    pub fn with_quadratic(mut self, i: usize, j: usize, value: f64) -> Self {
        self.m[(i, j)] = value;
        self.m[(j, i)] = value;
        self
    }

    pub fn n_modes(&self) -> usize {
        self.c.len() / 2
    }

    pub fn constant(&self) -> f64 {
        self.c0
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn quadratic(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn is_linear(&self) -> bool {
        self.m.iter().all(|v| *v == 0.0)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &QuadraticObservable, b: f64) -> Result<Self> {
        if other.c.len() != self.c.len() {
            return Err(Error::DimensionMismatch {
                expected: self.c.len(),
                found: other.c.len(),
            });
        }
        Ok(Self {
            c0: a * self.c0 + b * other.c0,
            c: &self.c * a + &other.c * b,
            m: &self.m * a + &other.m * b,
        })
    }
}

/// Mean and variance of an observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Exact moments of a symmetrically ordered quadratic form on a Gaussian state.
///
/// `mean = c0 + c.m + m.M.m + tr(M V)` and
/// `var = ct.V.ct + 2 tr(M V M V) + tr(M Omega M Omega)/2` with `ct = c + 2 M m`.
/// The last term is the ordering correction from the canonical commutators: it makes
/// the vacuum variance of `N` vanish.
pub fn quadratic_moments(state: &GaussianState, obs: &QuadraticObservable) -> Result<Moments> {
    Ok(quadratic_moments_with_scale(state, obs)?.0)
}

/// Moments plus the magnitude of the uncancelled variance terms, used to decide
/// whether a computed variance is zero up to rounding.
pub(crate) fn quadratic_moments_with_scale(
    state: &GaussianState,
    obs: &QuadraticObservable,
) -> Result<(Moments, f64)> {
    let dim = 2 * state.n_modes;
    if obs.c.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: obs.c.len(),
        });
    }
    let mean_vec = &state.mean;
    let cov = &state.cov;
    let m_mean = &obs.m * mean_vec;
    let mean = obs.c0 + obs.c.dot(mean_vec) + mean_vec.dot(&m_mean) + (&obs.m * cov).trace();

    let ct = &obs.c + &m_mean * 2.0;
    let linear_part = ct.dot(&(cov * &ct));
    let mv = &obs.m * cov;
    let fluct = 2.0 * (&mv * &mv).trace();
    let omega = symplectic_form(state.n_modes);
    let mo = &obs.m * omega;
    let ordering = 0.5 * (&mo * &mo).trace();
    let variance = linear_part + fluct + ordering;
    let scale = linear_part.abs() + fluct.abs() + ordering.abs();
    Ok((Moments { mean, variance }, scale))
}

/// Mean photon number and its variance in `mode`.
pub fn photon_stats(state: &GaussianState, mode: usize) -> Result<Moments> {
    let obs = QuadraticObservable::photon_number(state.n_modes, mode)?;
    quadratic_moments(state, &obs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn vacuum_shapes() {
        let v1 = GaussianState::vacuum(1).unwrap();
        assert_eq!(v1.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(v1.cov(), &(DMatrix::identity(2, 2) * 0.5));
        let v2 = GaussianState::vacuum(2).unwrap();
        assert_eq!(v2.mean().len(), 4);
        assert_eq!(v2.cov(), &(DMatrix::identity(4, 4) * 0.5));
        assert_eq!(GaussianState::vacuum(0), Err(Error::NoModes));
    }

    #[test]
    fn vacuum_has_no_photons() {
        let s = photon_stats(&GaussianState::vacuum(1).unwrap(), 0).unwrap();
        assert_eq!(s.mean, 0.0);
        assert_eq!(s.variance, 0.0);
    }

    #[test]
    fn squeeze_matrix_entries() {
        let t = SymplecticTransform::squeeze(1, 0, 0.5).unwrap();
        assert!(close(t.matrix()[(0, 0)], 1.648721, 1e-6));
        assert!(close(t.matrix()[(1, 1)], 0.606531, 1e-6));
        assert_eq!(t.matrix()[(0, 1)], 0.0);
    }

    #[test]
    fn zero_rotation_is_identity() {
        let t = SymplecticTransform::rotation(1, 0, 0.0).unwrap();
        assert_eq!(t, SymplecticTransform::identity(1).unwrap());
    }

    #[test]
    fn rotation_entries_follow_phase_shift_convention() {
        // x_out = x cos + p sin, p_out = -x sin + p cos
        let phi = 0.3_f64;
        let t = SymplecticTransform::rotation(1, 0, phi).unwrap();
        let s = t.matrix();
        assert_eq!(s[(0, 0)], phi.cos());
        assert_eq!(s[(0, 1)], phi.sin());
        assert_eq!(s[(1, 0)], -phi.sin());
        assert_eq!(s[(1, 1)], phi.cos());
    }

    #[test]
    fn beamsplitter_is_involutory() {
        let b = SymplecticTransform::beamsplitter(2, 0, 1).unwrap();
        let bb = b.then(&b).unwrap();
        assert!((bb.matrix() - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-15);
        assert_eq!(
            SymplecticTransform::beamsplitter(2, 1, 1),
            Err(Error::SameMode(1))
        );
        assert!(matches!(
            SymplecticTransform::beamsplitter(2, 0, 2),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn displacement_shifts_mean_only() {
        let v = GaussianState::vacuum(1).unwrap();
        let out = v
            .apply(&SymplecticTransform::displacement(1, 0, 1.0).unwrap())
            .unwrap();
        assert!(close(out.mean()[0], 1.414214, 1e-6));
        assert_eq!(out.mean()[1], 0.0);
        assert_eq!(out.cov(), v.cov());
    }

    #[test]
    fn squeezed_vacuum_covariance() {
        let out = GaussianState::vacuum(1)
            .unwrap()
            .apply(&SymplecticTransform::squeeze(1, 0, 0.5).unwrap())
            .unwrap();
        assert!(close(out.cov()[(0, 0)], 1.359141, 1e-6));
        assert!(close(out.cov()[(1, 1)], 0.183940, 1e-6));
    }

    #[test]
    fn identity_transform_keeps_state() {
        let s = GaussianState::vacuum(2)
            .unwrap()
            .apply(&SymplecticTransform::squeeze(2, 1, 0.4).unwrap())
            .unwrap();
        assert_eq!(s.apply(&SymplecticTransform::identity(2).unwrap()).unwrap(), s);
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let s = GaussianState::vacuum(1).unwrap();
        let t = SymplecticTransform::identity(2).unwrap();
        assert_eq!(
            s.apply(&t),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 4
            })
        );
    }

    #[test]
    fn constructor_rejects_unphysical_covariance() {
        let mean = DVector::zeros(2);
        assert!(matches!(
            GaussianState::new(mean.clone(), DMatrix::identity(2, 2) * 0.1),
            Err(Error::Unphysical(_))
        ));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            GaussianState::new(mean.clone(), asym),
            Err(Error::NotSymmetric(_))
        ));
        assert!(GaussianState::new(mean, DMatrix::identity(2, 2)).is_ok());
    }

    #[test]
    fn new_transform_checks_symplectic_condition() {
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0]));
        assert!(matches!(
            SymplecticTransform::new(bad, DVector::zeros(2)),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn photon_stats_squeezed_coherent() {
        let state = GaussianState::vacuum(1)
            .unwrap()
            .apply(&SymplecticTransform::squeeze(1, 0, 0.5).unwrap())
            .unwrap()
            .apply(&SymplecticTransform::displacement(1, 0, 2.0).unwrap())
            .unwrap();
        let s = photon_stats(&state, 0).unwrap();
        assert!(close(s.mean, 4.271540, 1e-6));
        assert!(close(s.variance, 11.563679, 1e-6));
    }

    #[test]
    fn photon_stats_squeezed_vacuum_ten_photons() {
        let r = 10f64.sqrt().asinh();
        let state = GaussianState::vacuum(1)
            .unwrap()
            .apply(&SymplecticTransform::squeeze(1, 0, r).unwrap())
            .unwrap();
        let s = photon_stats(&state, 0).unwrap();
        assert!(close(s.mean, 10.0, 1e-12));
        assert!(close(s.variance, 220.0, 1e-12));
    }

    #[test]
    fn coherent_state_is_poissonian() {
        let state = GaussianState::vacuum(1)
            .unwrap()
            .apply(&SymplecticTransform::displacement(1, 0, 1.7).unwrap())
            .unwrap();
        let s = photon_stats(&state, 0).unwrap();
        assert!(close(s.mean, 1.7 * 1.7, 1e-14));
        assert!(close(s.variance, 1.7 * 1.7, 1e-14));
    }

    #[test]
    fn symmetrized_xp_on_vacuum() {
        // (a^2 - a^dag^2)/(2i) |0> has squared norm 1/2
        let obs = QuadraticObservable::zero(1).unwrap().with_quadratic(0, 1, 0.5);
        let m = quadratic_moments(&GaussianState::vacuum(1).unwrap(), &obs).unwrap();
        assert_eq!(m.mean, 0.0);
        assert!(close(m.variance, 0.5, 1e-15));
    }

    #[test]
    fn symplectic_eigenvalues_of_pure_state_are_half() {
        let state = GaussianState::vacuum(2)
            .unwrap()
            .apply(&SymplecticTransform::squeeze(2, 0, 0.7).unwrap())
            .unwrap()
            .apply(&SymplecticTransform::beamsplitter(2, 0, 1).unwrap())
            .unwrap();
        for nu in symplectic_eigenvalues(state.cov()).unwrap() {
            assert!((nu - 0.5).abs() < 1e-12);
        }
    }
}
