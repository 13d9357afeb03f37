//! Rank-one perturbation algebra for linear operators.
//!
//! * [`operator`]: vectors, functionals, dense operators and `|f><l|` forms.
//! * [`rank_one`]: inverse of `A − f<l|` from `A⁻¹`, and its singular case.
//! * [`krein`]: `(z − T₂)⁻¹ − (z − T₁)⁻¹` when `T₂⁻¹ − T₁⁻¹` has rank one, and
//!   the new eigenvalues as zeros of the scalar denominator.
//! * [`recovery`]: the same computations driven by the difference operator
//!   alone, via probe vectors.
//! * [`testbed`]: closed forms for `−d²/dx²` on `[0, 1]` with
//!   Dirichlet/Dirichlet and Dirichlet/Neumann ends.
//! * [`discrete`]: the finite-difference counterpart used as an oracle.
//! * [`suite`]: the named invariant checks run by `krein verify`.

pub mod discrete;
pub mod error;
pub mod krein;
mod lu;
pub mod operator;
pub mod quadrature;
pub mod rank_one;
pub mod recovery;
pub mod sample;
pub mod suite;
pub mod testbed;

pub use error::{Error, PoleKind, Result};
pub use krein::{ResolventDifference, SpectralPoint};
pub use lu::PIVOT_RELATIVE_TOLERANCE;
pub use num_complex::Complex64;
pub use operator::{
    invert, outer, pair, rank_estimate, DenseOperator, Functional, RankOneForm, Vector,
};
