//! Inverse of a rank-one perturbation `B = A − f<l|` given `A⁻¹`.
//!
//! Writing `Bv = w` as `v = A⁻¹(w + c·f)` with `c = <l|v>` reduces the problem
//! to one scalar equation `(1 − <l|A⁻¹f>)·c = <l|A⁻¹w>`. When the scalar
//! `1 − <l|A⁻¹f>` is nonzero this gives
//!
//! ```text
//! B⁻¹ − A⁻¹ = A⁻¹f <l|A⁻¹ / (1 − <l|A⁻¹f>)
//! ```
//!
//! and when it vanishes `A⁻¹f` is a null vector of `B`. Every null vector of
//! `B` has that form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{outer, pair, DenseOperator, RankOneForm, Vector};

/// Relative width of the band around the singular manifold.
pub const SINGULAR_RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum PerturbedInverse {
    /// `B⁻¹ = A⁻¹ + correction`.
    Regular {
        correction: DenseOperator,
        denominator: Complex64,
    },
    /// `B` is singular; `B·null_vector = 0`.
    Singular {
        null_vector: Vector,
        denominator: Complex64,
    },
}

impl PerturbedInverse {
    pub fn denominator(&self) -> Complex64 {
        match self {
            PerturbedInverse::Regular { denominator, .. }
            | PerturbedInverse::Singular { denominator, .. } => *denominator,
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, PerturbedInverse::Regular { .. })
    }

    /// `B⁻¹` for the regular branch.
    pub fn inverse(&self, a_inv: &DenseOperator) -> Option<DenseOperator> {
        match self {
            PerturbedInverse::Regular { correction, .. } => a_inv.add(correction).ok(),
            PerturbedInverse::Singular { .. } => None,
        }
    }
}

/// `1 − <l|A⁻¹f>`.
pub fn denominator(a_inv: &DenseOperator, p: &RankOneForm) -> Result<Complex64> {
    let g = a_inv.apply(&p.f)?;
    Ok(Complex64::new(1.0, 0.0) - pair(&p.l, &g)?)
}

/// Default singularity band `1e-10·(1 + |<l|A⁻¹f>|)`.
pub fn default_tolerance(a_inv: &DenseOperator, p: &RankOneForm) -> Result<f64> {
    let g = a_inv.apply(&p.f)?;
    Ok(SINGULAR_RELATIVE_TOLERANCE * (1.0 + pair(&p.l, &g)?.norm()))
}

/// The inverse of `B = A − f<l|` expressed through `A⁻¹`, or a null vector
/// of `B` when `|1 − <l|A⁻¹f>| ≤ tol`.
pub fn perturbed_inverse(
    a_inv: &DenseOperator,
    p: &RankOneForm,
    tol: f64,
) -> Result<PerturbedInverse> {
    let g = a_inv.apply(&p.f)?;
    let h = p.l.compose(a_inv)?;
    let denominator = Complex64::new(1.0, 0.0) - pair(&p.l, &g)?;
    if denominator.norm() > tol {
        let correction = outer(&g, &h)?.scale(denominator.inv());
        return Ok(PerturbedInverse::Regular {
            correction,
            denominator,
        });
    }
    // With f = 0 the denominator is exactly 1, so only an absurd tolerance
    // lands here.
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(PerturbedInverse::Singular {
        null_vector: g,
        denominator,
    })
}

/// Solves `(A − f<l|)v = w` with two applications of `A⁻¹`, never forming
/// `B⁻¹`.
pub fn solve_perturbed(
    a_inv: &DenseOperator,
    p: &RankOneForm,
    w: &Vector,
    tol: f64,
) -> Result<Vector> {
    let denominator = denominator(a_inv, p)?;
    if denominator.norm() <= tol {
        return Err(Error::SingularPerturbation(denominator));
    }
    let a_inv_w = a_inv.apply(w)?;
    let c = pair(&p.l, &a_inv_w)? / denominator;
    a_inv.apply(&w.add(&p.f.scale(c))?)
}

/// Checks the characterization of a null vector `v₀` of `B`: `<l|v₀> ≠ 0`,
/// `1 − <l|A⁻¹f> = 0` and `v₀ ∥ A⁻¹f`, each within `tol`.
///
/// Collinearity is measured by the sine of the angle between `v₀` and `A⁻¹f`.
pub fn null_space_certificate(
    a_inv: &DenseOperator,
    p: &RankOneForm,
    v0: &Vector,
    tol: f64,
) -> Result<bool> {
    if v0.is_zero() {
        return Err(Error::ZeroVector);
    }
    let lv0 = pair(&p.l, v0)?;
    if lv0.norm() <= tol * p.l.norm() * v0.norm() {
        return Ok(false);
    }
    let g = a_inv.apply(&p.f)?;
    let denominator = Complex64::new(1.0, 0.0) - pair(&p.l, &g)?;
    if denominator.norm() > tol {
        return Ok(false);
    }
    Ok(sine_of_angle(&g, v0)? <= tol)
}

fn sine_of_angle(a: &Vector, b: &Vector) -> Result<f64> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Ok(1.0);
    }
    // Component of b orthogonal to a, relative to |b|.
    let proj: Complex64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        / (na * na);
    let orth = b.sub(&a.scale(proj))?;
    Ok(orth.norm() / nb)
}
