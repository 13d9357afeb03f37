//! Working with a rank-one difference `D = T₂⁻¹ − T₁⁻¹` without knowing its
//! factors.
//!
//! For any `f₀`, `l₀` with `<l₀|D f₀> ≠ 0`,
//! `D = |D f₀><l₀ D| / <l₀|D f₀>`, and for any `S`,
//! `<l|S f> = <l₀|D S D f₀> / <l₀|D f₀>` regardless of how `D` is factored.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krein::{hit_tolerance, ResolventDifference};
use crate::operator::{pair, rank_estimate, DenseOperator, Functional, RankOneForm, Vector};

/// Probes with `|<l₀|D f₀>| ≤ PROBE_ADMISSIBILITY·‖D‖_max` are rejected.
pub const PROBE_ADMISSIBILITY: f64 = 1e-12;

/// Relative singular-value cut used to confirm that `D` has rank one.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// A test vector and functional with nonzero pairing through `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub f0: Vector,
    pub l0: Functional,
    /// `<l₀|D f₀>`.
    pub pairing: Complex64,
}

impl Probe {
    /// A probe from arbitrary `f₀`, `l₀`; fails if the pairing is not
    /// admissible.
    pub fn new(d: &DenseOperator, f0: Vector, l0: Functional) -> Result<Self> {
        let pairing = pair(&l0, &d.apply(&f0)?)?;
        check_admissible(d, pairing)?;
        Ok(Probe { f0, l0, pairing })
    }

    /// `f₀ = e_col`, `l₀ = e_row`, so the pairing is the entry `D[row, col]`.
    pub fn coordinate(d: &DenseOperator, row: usize, col: usize) -> Result<Self> {
        let n = d.dim();
        Self::new(d, Vector::basis(n, col)?, Functional::basis(n, row)?)
    }
}

fn check_admissible(d: &DenseOperator, pairing: Complex64) -> Result<()> {
    let threshold = PROBE_ADMISSIBILITY * d.max_norm();
    if pairing.norm() > threshold && pairing.norm() > 0.0 {
        Ok(())
    } else {
        Err(Error::InadmissibleProbe { pairing, threshold })
    }
}

/// The coordinate probe at the entry of largest modulus. Ties go to the
/// smallest `(row, col)` in lexicographic order.
pub fn choose_probe(d: &DenseOperator, tol: f64) -> Result<Probe> {
    let n = d.dim();
    let mut best = (0, 0, 0.0_f64);
    for row in 0..n {
        for col in 0..n {
            let m = d.entry(row, col).norm();
            if m > best.2 {
                best = (row, col, m);
            }
        }
    }
    let (row, col, max) = best;
    if max == 0.0 || max <= tol * d.max_norm() {
        return Err(Error::ZeroDifference);
    }
    Probe::coordinate(d, row, col)
}

/// `f₁ = D f₀ / <l₀|D f₀>`, `l₁ = l₀∘D`, so that `|f₁><l₁| = D`. Refuses
/// differences whose numerical rank is not one.
pub fn recover_factors(d: &DenseOperator, probe: &Probe) -> Result<RankOneForm> {
    let rank = rank_estimate(d, RANK_TOLERANCE)?;
    if rank != 1 {
        return Err(Error::NotRankOne(rank));
    }
    let d_f0 = d.apply(&probe.f0)?;
    let pairing = pair(&probe.l0, &d_f0)?;
    check_admissible(d, pairing)?;
    RankOneForm::new(d_f0.scale(pairing.inv()), probe.l0.compose(d)?)
}

/// `<l|S f>` for any factorization `D = |f><l|`, evaluated as
/// `<l₀|D S D f₀> / <l₀|D f₀>`.
pub fn bilinear_value(d: &DenseOperator, s: &DenseOperator, probe: &Probe) -> Result<Complex64> {
    let d_f0 = d.apply(&probe.f0)?;
    let pairing = pair(&probe.l0, &d_f0)?;
    check_admissible(d, pairing)?;
    let dsd_f0 = d.apply(&s.apply(&d_f0)?)?;
    Ok(pair(&probe.l0, &dsd_f0)? / pairing)
}

/// The resolvent difference written through `D` itself:
/// `−S D S / (1 + z<l|S f>)` with `S = −I + z·R₁` and the denominator taken
/// from [`bilinear_value`].
pub fn resolvent_difference_factor_free(
    r1: &DenseOperator,
    z: Complex64,
    d: &DenseOperator,
    probe: &Probe,
    tol: f64,
) -> Result<ResolventDifference> {
    let rank = rank_estimate(d, RANK_TOLERANCE)?;
    if rank != 1 {
        return Err(Error::NotRankOne(rank));
    }
    let s = r1.affine(Complex64::new(-1.0, 0.0), z);
    let d_f0 = d.apply(&probe.f0)?;
    let pairing = pair(&probe.l0, &d_f0)?;
    check_admissible(d, pairing)?;

    let left = s.apply(&d_f0)?.scale(pairing.inv());
    let right = probe.l0.compose(d)?.compose(&s)?;
    let denominator = Complex64::new(1.0, 0.0) + z * bilinear_value(d, &s, probe)?;
    if denominator.norm() <= tol {
        return Err(Error::EigenvalueHit { z, denominator });
    }
    Ok(ResolventDifference {
        left,
        right,
        denominator,
    })
}

/// Default eigenvalue-hit band for the factor-free path, using the factor
/// norms of the probe's factorization.
pub fn factor_free_hit_tolerance(z: Complex64, d: &DenseOperator, probe: &Probe) -> Result<f64> {
    let d_f0 = d.apply(&probe.f0)?;
    let pairing = pair(&probe.l0, &d_f0)?;
    check_admissible(d, pairing)?;
    let l1 = probe.l0.compose(d)?;
    Ok(hit_tolerance(z, d_f0.norm() / pairing.norm(), l1.norm()))
}
