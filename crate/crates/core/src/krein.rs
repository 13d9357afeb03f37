//! Resolvent of a rank-one perturbed inverse.
//!
//! If `T₂⁻¹ − T₁⁻¹ = |f><l|` and `R₁(z) = (z − T₁)⁻¹`, then with
//! `S(z) = −I + z·R₁(z)`
//!
//! ```text
//! (z − T₂)⁻¹ − (z − T₁)⁻¹ = − S|f><l|S / (1 + z<l|S f>)
//! ```
//!
//! whenever the scalar denominator is nonzero. Its real zeros are the
//! eigenvalues of `T₂` not shared with `T₁`, with eigenvectors `S(z)f`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{outer, pair, DenseOperator, Functional, RankOneForm, Vector};

/// Relative band for declaring `z` an eigenvalue of the perturbed operator.
pub const EIGENVALUE_HIT_TOLERANCE: f64 = 1e-10;

/// Probe points per bracket in the root search.
pub const ROOT_SEARCH_PROBES: usize = 64;

/// Relative bisection tolerance for denominator roots.
pub const ROOT_RELATIVE_TOLERANCE: f64 = 1e-12;

/// A spectral parameter `z` together with a square root `k`, `k² = z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    z: Complex64,
    k: Complex64,
}

impl SpectralPoint {
    /// Uses the principal square root.
    pub fn from_z(z: Complex64) -> Self {
        SpectralPoint { z, k: z.sqrt() }
    }

    pub fn from_real(z: f64) -> Self {
        Self::from_z(Complex64::new(z, 0.0))
    }

    /// `z = k·k` exactly as computed.
    pub fn from_k(k: Complex64) -> Self {
        SpectralPoint { z: k * k, k }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    /// The same `z` on the other square-root branch.
    pub fn other_branch(&self) -> Self {
        SpectralPoint {
            z: self.z,
            k: -self.k,
        }
    }

    /// False when `excluded` flags `z` as part of a known spectrum.
    pub fn is_admissible(&self, excluded: impl Fn(Complex64) -> bool) -> bool {
        self.z.is_finite() && !excluded(self.z)
    }
}

/// `−|left><right| / denominator`, the factored form of
/// `(z − T₂)⁻¹ − (z − T₁)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventDifference {
    /// `S(z)f`.
    pub left: Vector,
    /// `l∘S(z)`.
    pub right: Functional,
    /// `1 + z<l|S(z)f>`.
    pub denominator: Complex64,
}

impl ResolventDifference {
    pub fn materialize(&self) -> Result<DenseOperator> {
        Ok(outer(&self.left, &self.right)?.scale(-self.denominator.inv()))
    }

    pub fn apply(&self, u: &Vector) -> Result<Vector> {
        let coeff = -pair(&self.right, u)? / self.denominator;
        Ok(self.left.scale(coeff))
    }
}

/// `−f + z·R₁f`.
pub fn deflect(r1: &DenseOperator, z: Complex64, f: &Vector) -> Result<Vector> {
    deflect_with(|v| r1.apply(v), z, f)
}

/// [`deflect`] with the resolvent supplied as an action.
pub fn deflect_with(
    apply_r1: impl Fn(&Vector) -> Result<Vector>,
    z: Complex64,
    f: &Vector,
) -> Result<Vector> {
    let r1f = apply_r1(f)?;
    r1f.scale(z).sub(f)
}

/// `l∘(−I + z·R₁)`.
pub fn deflect_functional(r1: &DenseOperator, z: Complex64, l: &Functional) -> Result<Functional> {
    l.compose(r1)?
        .scale(z)
        .add(&l.scale(Complex64::new(-1.0, 0.0)))
}

/// `1 + z<l|(−I + z·R₁)f>`.
pub fn krein_denominator(r1: &DenseOperator, z: Complex64, p: &RankOneForm) -> Result<Complex64> {
    krein_denominator_with(|v| r1.apply(v), z, p)
}

/// [`krein_denominator`] with the resolvent supplied as an action, for
/// callers that can apply `R₁` without materializing it.
pub fn krein_denominator_with(
    apply_r1: impl Fn(&Vector) -> Result<Vector>,
    z: Complex64,
    p: &RankOneForm,
) -> Result<Complex64> {
    let s_f = deflect_with(apply_r1, z, &p.f)?;
    Ok(Complex64::new(1.0, 0.0) + z * pair(&p.l, &s_f)?)
}

/// `1e-10·(1 + |z|·‖f‖·‖l‖)`: the denominator grows with `z`.
pub fn hit_tolerance(z: Complex64, f_norm: f64, l_norm: f64) -> f64 {
    EIGENVALUE_HIT_TOLERANCE * (1.0 + z.norm() * f_norm * l_norm)
}

pub fn default_hit_tolerance(z: Complex64, p: &RankOneForm) -> f64 {
    hit_tolerance(z, p.f.norm(), p.l.norm())
}

/// `(z − T₂)⁻¹ − (z − T₁)⁻¹` in factored form, given `R₁ = (z − T₁)⁻¹` and
/// `T₂⁻¹ − T₁⁻¹ = |f><l|`.
///
/// At `z = 0` this reduces to `−|f><l|`, the difference of the negated
/// inverses.
pub fn resolvent_difference(
    r1: &DenseOperator,
    z: Complex64,
    p: &RankOneForm,
    tol: f64,
) -> Result<ResolventDifference> {
    let left = deflect(r1, z, &p.f)?;
    let right = deflect_functional(r1, z, &p.l)?;
    let denominator = Complex64::new(1.0, 0.0) + z * pair(&p.l, &left)?;
    if denominator.norm() <= tol {
        return Err(Error::EigenvalueHit { z, denominator });
    }
    Ok(ResolventDifference {
        left,
        right,
        denominator,
    })
}

/// Real roots of a denominator function on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSearch {
    pub roots: Vec<f64>,
    /// More roots exist in the interval than were requested.
    pub truncated: bool,
}

/// Real roots of `denominator` on `[lo, hi]`.
///
/// `exclusions` are the poles of `R₁` (old eigenvalues); the interval is cut
/// at each of them, every piece is probed at [`ROOT_SEARCH_PROBES`]
/// subdivisions, and each sign change between consecutive finite probes is
/// refined by bisection to relative tolerance [`ROOT_RELATIVE_TOLERANCE`].
/// Only the real part of the denominator is inspected. Probes where the
/// denominator fails to evaluate are skipped.
pub fn denominator_roots(
    denominator: impl Fn(Complex64) -> Result<Complex64>,
    interval: (f64, f64),
    max_count: usize,
    exclusions: &[f64],
) -> Result<RootSearch> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "invalid search interval [{lo}, {hi}]"
        )));
    }
    let eval = |x: f64| -> Option<f64> {
        denominator(Complex64::new(x, 0.0))
            .ok()
            .map(|d| d.re)
            .filter(|d| d.is_finite())
    };

    let mut cuts: Vec<f64> = exclusions
        .iter()
        .copied()
        .filter(|&e| e > lo && e < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push((lo, exclusions.contains(&lo)));
    edges.extend(cuts.iter().map(|&e| (e, true)));
    edges.push((hi, exclusions.contains(&hi)));

    let mut roots = Vec::new();
    for window in edges.windows(2) {
        let ((a, a_pole), (b, b_pole)) = (window[0], window[1]);
        let nudge = 1e-9 * (b - a);
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=ROOT_SEARCH_PROBES {
            let mut x = a + (b - a) * i as f64 / ROOT_SEARCH_PROBES as f64;
            if i == 0 && a_pole {
                x += nudge;
            }
            if i == ROOT_SEARCH_PROBES && b_pole {
                x -= nudge;
            }
            let Some(dx) = eval(x) else { continue };
            let found = if dx == 0.0 {
                Some(x)
            } else {
                match prev {
                    Some((xp, dp)) if dp.signum() != dx.signum() => Some(bisect(&eval, xp, dp, x)),
                    _ => None,
                }
            };
            if let Some(root) = found {
                if roots.len() == max_count {
                    return Ok(RootSearch {
                        roots,
                        truncated: true,
                    });
                }
                roots.push(root);
            }
            // An exact zero closes the current bracket.
            prev = (dx != 0.0).then_some((x, dx));
        }
    }
    Ok(RootSearch {
        roots,
        truncated: false,
    })
}

fn bisect(eval: &impl Fn(f64) -> Option<f64>, mut a: f64, mut da: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= ROOT_RELATIVE_TOLERANCE * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
            return mid;
        }
        let Some(dm) = eval(mid) else { return mid };
        if dm == 0.0 {
            return mid;
        }
        if dm.signum() == da.signum() {
            a = mid;
            da = dm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// A new eigenvalue of `T₂` with its eigenfunction `S(z_n)f`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub z: Complex64,
    pub k: Complex64,
    pub eigenfunction: Vector,
    /// `‖T₂v − z v‖/‖v‖`, when `T₂` was supplied.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSearch {
    pub pairs: Vec<EigenPair>,
    pub truncated: bool,
}

/// Locates the eigenvalues of `T₂` on a real interval as roots of the
/// denominator and pairs each with `eigenfunction(z_n)`, which should
/// evaluate `S(z_n)f`. If `t2` is given the eigen-residual is recorded.
pub fn find_new_eigenvalues(
    denominator: impl Fn(Complex64) -> Result<Complex64>,
    eigenfunction: impl Fn(Complex64) -> Result<Vector>,
    t2: Option<&DenseOperator>,
    interval: (f64, f64),
    max_count: usize,
    exclusions: &[f64],
) -> Result<EigenSearch> {
    let search = denominator_roots(denominator, interval, max_count, exclusions)?;
    let pairs = search
        .roots
        .iter()
        .map(|&root| {
            let point = SpectralPoint::from_real(root);
            let v = eigenfunction(point.z())?;
            let residual = match t2 {
                Some(t) => {
                    let r = t.apply(&v)?.sub(&v.scale(point.z()))?;
                    Some(r.norm() / v.norm())
                }
                None => None,
            };
            Ok(EigenPair {
                z: point.z(),
                k: point.k(),
                eigenfunction: v,
                residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSearch {
        pairs,
        truncated: search.truncated,
    })
}
