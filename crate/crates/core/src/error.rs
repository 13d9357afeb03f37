use std::fmt;

use num_complex::Complex64;

/// Which family of spectral poles a kernel evaluation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleKind {
    /// `sin k = 0`: an eigenvalue of the Dirichlet–Dirichlet operator.
    Dirichlet,
    /// `cos k = 0`: an eigenvalue of the Dirichlet–Neumann operator.
    Neumann,
}

impl fmt::Display for PoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleKind::Dirichlet => f.write_str("Dirichlet-Dirichlet (sin k = 0)"),
            PoleKind::Neumann => f.write_str("Dirichlet-Neumann (cos k = 0)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is numerically singular (pivot {pivot:e} at elimination step {step})")]
    SingularMatrix { pivot: f64, step: usize },

    #[error("rank-one perturbation is singular: denominator {0} is within tolerance of zero")]
    SingularPerturbation(Complex64),

    #[error("z = {z} is an eigenvalue of the perturbed operator (denominator {denominator})")]
    EigenvalueHit {
        z: Complex64,
        denominator: Complex64,
    },

    #[error("z = {0} lies in the spectrum of the operator")]
    SpectrumHit(Complex64),

    #[error("{kind} pole at z = {z}")]
    Pole { kind: PoleKind, z: Complex64 },

    #[error("difference operator vanishes; nothing to recover")]
    ZeroDifference,

    #[error("probe pairing {pairing} is not above admissibility threshold {threshold:e}")]
    InadmissibleProbe { pairing: Complex64, threshold: f64 },

    #[error("operator has numerical rank {0}, expected exactly one")]
    NotRankOne(usize),

    #[error("coordinate {0} lies outside [0, 1]")]
    OutOfRange(f64),

    #[error("grid needs at least 2 interior nodes, got {0}")]
    GridTooSmall(usize),

    #[error("vector is zero")]
    ZeroVector,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by evaluating at (or numerically on) a spectral
    /// point: poles, eigenvalue hits and singular shifted operators.
    pub fn is_spectral(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::EigenvalueHit { .. }
                | Error::SpectrumHit(_)
                | Error::SingularPerturbation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
