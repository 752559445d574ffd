use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::{check_dim, ladder, FockOperator, FockState};
use crate::error::{Error, Result};
use crate::gaussian::QuadraticObservable;

/// `sum_k c_k (A_k (x) B_k)`; a missing factor is the identity.
#[derive(Debug, Clone)]
pub struct TwoModeOperator {
    dim: usize,
    terms: Vec<Term>,
}

/// Nonzero entries `(row, col, value)` of a single-mode factor. Ladder-built operators
/// are banded, so this keeps the grid products at `O(D^2)` per term.
type Sparse = Vec<(usize, usize, C64)>;

#[derive(Debug, Clone)]
struct Term {
    coef: C64,
    first: Option<Sparse>,
    second: Option<Sparse>,
}

fn sparse(m: &DMatrix<C64>) -> Sparse {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl TwoModeOperator {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            terms: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(
        &mut self,
        coef: C64,
        first: Option<&FockOperator>,
        second: Option<&FockOperator>,
    ) -> Result<()> {
        for op in [first, second].into_iter().flatten() {
            if op.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: op.dim(),
                });
            }
        }
        self.terms.push(Term {
            coef,
            first: first.map(|o| sparse(o.entries())),
            second: second.map(|o| sparse(o.entries())),
        });
        Ok(())
    }

    /// `(A (x) B) psi` is `A Psi B^T` on the amplitude grid.
    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        if state.n_modes() != 2 || state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let dim = self.dim;
        // Psi[n1][n2] row-major, so row n1 is the slice [n1 * D, (n1 + 1) * D)
        let grid = state.amplitudes().as_slice();
        let mut out = vec![C64::new(0.0, 0.0); dim * dim];
        let mut left = vec![C64::new(0.0, 0.0); dim * dim];
        for term in &self.terms {
            // left = A Psi
            let left: &[C64] = match &term.first {
                Some(a) => {
                    left.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                    for &(i, j, v) in a {
                        let (dst, src) = (i * dim, j * dim);
                        for k in 0..dim {
                            left[dst + k] += v * grid[src + k];
                        }
                    }
                    &left
                }
                None => grid,
            };
            // out += c left B^T, i.e. out[n1][k] += c B[k][l] left[n1][l]
            match &term.second {
                Some(b) => {
                    for &(k, l, v) in b {
                        let w = v * term.coef;
                        for n1 in 0..dim {
                            out[n1 * dim + k] += w * left[n1 * dim + l];
                        }
                    }
                }
                None => {
                    for (o, x) in out.iter_mut().zip(left) {
                        *o += term.coef * x;
                    }
                }
            }
        }
        FockState::new(dim, 2, DVector::from_vec(out))
    }

    pub fn total_number(dim: usize) -> Result<Self> {
        let n = super::number(dim)?;
        let mut op = Self::new(dim)?;
        op.push(C64::from(1.0), Some(&n), None)?;
        op.push(C64::from(1.0), None, Some(&n))?;
        Ok(op)
    }

    /// `N_- = a1^dag a2 + a2^dag a1`.
    pub fn number_difference(dim: usize) -> Result<Self> {
        let a = ladder(dim)?;
        let ad = a.adjoint();
        let mut op = Self::new(dim)?;
        op.push(C64::from(1.0), Some(&ad), Some(&a))?;
        op.push(C64::from(1.0), Some(&a), Some(&ad))?;
        Ok(op)
    }

    pub(crate) fn from_quadratic(
        obs: &QuadraticObservable,
        x: &FockOperator,
        p: &FockOperator,
    ) -> Result<Self> {
        let dim = x.dim();
        let mut op = Self::new(dim)?;
        if obs.constant() != 0.0 {
            op.push(C64::from(obs.constant()), None, None)?;
        }
        let quad = |k: usize| if k.is_multiple_of(2) { x } else { p };
        let place = |k: usize, o: FockOperator| -> (Option<FockOperator>, Option<FockOperator>) {
            if k / 2 == 0 {
                (Some(o), None)
            } else {
                (None, Some(o))
            }
        };
        for (k, &ck) in obs.linear().iter().enumerate() {
            if ck != 0.0 {
                let (f, s) = place(k, quad(k).clone());
                op.push(C64::from(ck), f.as_ref(), s.as_ref())?;
            }
        }
        let m = obs.quadratic();
        for i in 0..4 {
            for j in i..4 {
                let mij = m[(i, j)];
                if mij == 0.0 {
                    continue;
                }
                // q_i o q_j appears twice in the double sum when i != j
                let weight = if i == j { mij } else { 2.0 * mij };
                if i / 2 == j / 2 {
                    let (f, s) = place(i, quad(i).sym_product(quad(j)));
                    op.push(C64::from(weight), f.as_ref(), s.as_ref())?;
                } else {
                    op.push(C64::from(weight), Some(quad(i)), Some(quad(j)))?;
                }
            }
        }
        Ok(op)
    }
}

/// States `|k, n - k>` with both indices below `dim`: the fixed-total-number sector `n`.
fn sector(dim: usize, n: usize) -> Vec<(usize, usize)> {
    let lo = n.saturating_sub(dim - 1);
    let hi = n.min(dim - 1);
    (lo..=hi).map(|k| (k, n - k)).collect()
}

/// Block of `a1^dag a2` restricted to a sector, indexed by position in [`sector`].
fn hop_block(states: &[(usize, usize)]) -> DMatrix<f64> {
    let m = states.len();
    let mut h = DMatrix::zeros(m, m);
    for idx in 0..m.saturating_sub(1) {
        let (k, l) = states[idx];
        // a1^dag a2 |k, l> = sqrt((k + 1) l) |k + 1, l - 1>
        h[(idx + 1, idx)] = (((k + 1) * l) as f64).sqrt();
    }
    h
}

/// Beamsplitter unitary (port basis -> arm basis) on one sector:
/// `W = exp(-(pi/4)(a1^dag a2 - a2^dag a1)) (-1)^{n2}`, which maps `b = B a`.
fn arm_rotation(states: &[(usize, usize)]) -> DMatrix<f64> {
    let hop = hop_block(states);
    let rotation = ((&hop - hop.transpose()) * (-std::f64::consts::FRAC_PI_4)).exp();
    let parity = DMatrix::from_diagonal(&DVector::from_iterator(
        states.len(),
        states.iter().map(|&(_, l)| if l % 2 == 0 { 1.0 } else { -1.0 }),
    ));
    rotation * parity
}

struct Sector {
    states: Vec<(usize, usize)>,
    indices: Vec<usize>,
    eigenvectors: DMatrix<f64>,
    eigenvalues: DVector<f64>,
}

/// Phase evolution `e^{-i N_- phi}` on a truncated two-mode space.
///
/// `N_-` and the beamsplitter conserve total photon number, so both are built
/// sector by sector: `N_-` by diagonalizing its tridiagonal block, the beamsplitter as
/// the exponential of its generator (built on demand, it is only a cross-check).
/// The truncation keeps only `n1, n2 < D`.
pub struct TwoModeEvolver {
    dim: usize,
    sectors: Vec<Sector>,
}

impl TwoModeEvolver {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let sectors = (0..=2 * (dim - 1))
            .map(|n| {
                let states = sector(dim, n);
                let hop = hop_block(&states);
                let generator = &hop + hop.transpose();
                let eig = SymmetricEigen::new(generator);
                Sector {
                    indices: states.iter().map(|&(k, l)| k * dim + l).collect(),
                    states,
                    eigenvectors: eig.eigenvectors,
                    eigenvalues: eig.eigenvalues,
                }
            })
            .collect();
        Ok(Self { dim, sectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, state: &FockState) -> Result<()> {
        if state.n_modes() != 2 || state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(())
    }

    /// Exponentiates `N_-` in the port basis.
    pub fn evolve(&self, state: &FockState, phi: f64) -> Result<FockState> {
        self.check(state)?;
        let amps = state.amplitudes();
        let mut out = DVector::<C64>::zeros(amps.len());
        for s in &self.sectors {
            let m = s.indices.len();
            let re = DVector::from_iterator(m, s.indices.iter().map(|&i| amps[i].re));
            let im = DVector::from_iterator(m, s.indices.iter().map(|&i| amps[i].im));
            let (c_re, c_im) = (s.eigenvectors.tr_mul(&re), s.eigenvectors.tr_mul(&im));
            let (mut r_re, mut r_im) = (DVector::zeros(m), DVector::zeros(m));
            for k in 0..m {
                let z = C64::new(c_re[k], c_im[k]) * C64::from_polar(1.0, -s.eigenvalues[k] * phi);
                r_re[k] = z.re;
                r_im[k] = z.im;
            }
            let (b_re, b_im) = (&s.eigenvectors * r_re, &s.eigenvectors * r_im);
            for (k, &i) in s.indices.iter().enumerate() {
                out[i] = C64::new(b_re[k], b_im[k]);
            }
        }
        FockState::new(self.dim, 2, out)
    }

    /// Same evolution through the arm basis: beamsplitter, `e^{-i (n1 - n2) phi}`,
    /// beamsplitter back.
    pub fn evolve_via_arms(&self, state: &FockState, phi: f64) -> Result<FockState> {
        self.check(state)?;
        let amps = state.amplitudes();
        let mut out = DVector::<C64>::zeros(amps.len());
        for s in &self.sectors {
            let block = DVector::from_iterator(s.indices.len(), s.indices.iter().map(|&i| amps[i]));
            let w = arm_rotation(&s.states).map(C64::from);
            let mut arms = &w * block;
            for (c, &(k, l)) in arms.iter_mut().zip(&s.states) {
                *c *= C64::from_polar(1.0, -(k as f64 - l as f64) * phi);
            }
            let back = w.transpose() * arms;
            for (k, &i) in s.indices.iter().enumerate() {
                out[i] = back[k];
            }
        }
        FockState::new(self.dim, 2, out)
    }
}

/// Distance between two two-mode states restricted to the total-number sectors
/// `n1 + n2 < D`, the ones the truncation represents completely.
pub fn complete_sector_distance(a: &FockState, b: &FockState) -> Result<f64> {
    if a.dim() != b.dim() || a.n_modes() != 2 || b.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let dim = a.dim();
    let (x, y) = (a.amplitudes(), b.amplitudes());
    let sum: f64 = (0..dim * dim)
        .filter(|k| k / dim + k % dim < dim)
        .map(|k| (x[k] - y[k]).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}
