use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    NoModes,

    #[error("mode index {mode} out of range for {n_modes} mode(s)")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("beamsplitter needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance violates the uncertainty relation (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("transform is not symplectic (max deviation {0:e})")]
    NotSymplectic(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("coupling-time product must be positive, got {0}")]
    NonPositiveCoupling(f64),

    #[error("Fock truncation D={dim} too small: tail mass {tail:e}, try D >= {suggested}")]
    Truncation {
        dim: usize,
        tail: f64,
        suggested: usize,
    },

    #[error("objective is not unimodal on [0, {upper}]")]
    NotUnimodal { upper: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
