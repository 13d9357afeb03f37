//! Closed forms for `T = −d²/dx²` on `[0, 1]` with `u(0) = 0` and either
//! `u(1) = 0` (DD) or `u'(1) = 0` (DN).
//!
//! Static kernels: `G_DD(x,ξ) = min(x,ξ)·(1 − max(x,ξ))`,
//! `G_DN(x,ξ) = min(x,ξ)`, so `G_DN − G_DD = x·ξ = f(x)·l(ξ)` with `f(x) = x`
//! and `l(u) = ∫₀¹ ξ u(ξ) dξ`.
//!
//! Spectral forms are written in `k` with `k² = z`. Every formula is even in
//! `k`; they are evaluated through `sin(kx)/k`, which is entire in `z`, so
//! `z = 0` needs no special case. Quantities that cancel for small `k` switch
//! to power series for `|k| ≤ 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, PoleKind, Result};
use crate::krein::SpectralPoint;
use crate::operator::Vector;

/// `|sin k|` or `|cos k|` below this times `max(1, |k|)` is treated as a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// Below this `|k|` the cancelling closed forms are replaced by series.
pub const SERIES_RADIUS: f64 = 1.0;

const SERIES_TERMS: usize = 14;

/// A point `(x, ξ)` of the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    x: f64,
    xi: f64,
}

impl KernelPoint {
    pub fn new(x: f64, xi: f64) -> Result<Self> {
        for v in [x, xi] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange(v));
            }
        }
        Ok(KernelPoint { x, xi })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn swapped(&self) -> Self {
        KernelPoint {
            x: self.xi,
            xi: self.x,
        }
    }

    fn ordered(&self) -> (f64, f64) {
        (self.x.min(self.xi), self.x.max(self.xi))
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange(x))
    }
}

/// `f(x) = x`.
pub fn f_function(x: f64) -> f64 {
    x
}

/// Density of `l`: `l(u) = ∫₀¹ l_density(ξ)·u(ξ) dξ`.
pub fn l_density(xi: f64) -> f64 {
    xi
}

pub fn g_dd_static(pt: KernelPoint) -> f64 {
    let (lo, hi) = pt.ordered();
    lo * (1.0 - hi)
}

pub fn g_dn_static(pt: KernelPoint) -> f64 {
    pt.x.min(pt.xi)
}

/// `x·ξ`.
pub fn static_difference(pt: KernelPoint) -> f64 {
    pt.x * pt.xi
}

/// `sin(kx)/k`, entire in `k²`.
fn sin_over_k(k: Complex64, x: f64) -> Complex64 {
    if k.norm() <= SERIES_RADIUS {
        let z = k * k;
        let x2 = x * x;
        // Σ (−z)^m x^(2m+1) / (2m+1)!
        let mut term = Complex64::new(x, 0.0);
        let mut sum = term;
        for m in 1..SERIES_TERMS {
            let mf = m as f64;
            term *= -z * x2 / ((2.0 * mf) * (2.0 * mf + 1.0));
            sum += term;
        }
        sum
    } else {
        (k * x).sin() / k
    }
}

fn guard_dirichlet(s: &SpectralPoint) -> Result<()> {
    let k = s.k();
    // The nearest Dirichlet pole is |k| = π.
    if k.norm() > SERIES_RADIUS && k.sin().norm() < POLE_GUARD * k.norm().max(1.0) {
        return Err(Error::Pole {
            kind: PoleKind::Dirichlet,
            z: s.z(),
        });
    }
    Ok(())
}

fn guard_neumann(s: &SpectralPoint) -> Result<()> {
    let k = s.k();
    if k.cos().norm() < POLE_GUARD * k.norm().max(1.0) {
        return Err(Error::Pole {
            kind: PoleKind::Neumann,
            z: s.z(),
        });
    }
    Ok(())
}

/// Kernel of `(z − T_DD)⁻¹`:
/// `−sin(k x_<) sin(k(1 − x_>)) / (k sin k)`.
pub fn g_dd_spectral(pt: KernelPoint, s: &SpectralPoint) -> Result<Complex64> {
    guard_dirichlet(s)?;
    let k = s.k();
    let (lo, hi) = pt.ordered();
    Ok(-sin_over_k(k, lo) * sin_over_k(k, 1.0 - hi) / sin_over_k(k, 1.0))
}

/// Kernel of `(z − T_DN)⁻¹`, obtained as the DD kernel plus
/// [`spectral_difference`].
pub fn g_dn_spectral(pt: KernelPoint, s: &SpectralPoint) -> Result<Complex64> {
    Ok(g_dd_spectral(pt, s)? + spectral_difference(pt, s)?)
}

/// `f_z = z (z − T_DD)⁻¹ f`, i.e. `x − sin(kx)/sin k`.
pub fn f_z_vector(x: f64, s: &SpectralPoint) -> Result<Complex64> {
    check_unit(x)?;
    guard_dirichlet(s)?;
    let k = s.k();
    if k.norm() <= SERIES_RADIUS {
        // (x sin k − sin kx) / sin k, numerator summed termwise.
        let z = k * k;
        let mut power = Complex64::new(1.0, 0.0);
        let mut x_power = x;
        let mut factorial = 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 1..SERIES_TERMS {
            let mf = m as f64;
            power *= -z;
            x_power *= x * x;
            factorial *= (2.0 * mf) * (2.0 * mf + 1.0);
            sum += power * ((x - x_power) / factorial);
        }
        Ok(sum / sin_over_k(k, 1.0))
    } else {
        Ok(Complex64::new(x, 0.0) - (k * x).sin() / k.sin())
    }
}

/// `((−I + z(z − T_DD)⁻¹) f)(x) = −sin(kx)/sin k`.
pub fn deflected_f(x: f64, s: &SpectralPoint) -> Result<Complex64> {
    check_unit(x)?;
    guard_dirichlet(s)?;
    let k = s.k();
    Ok(-sin_over_k(k, x) / sin_over_k(k, 1.0))
}

/// `<l|(−I + z(z − T_DD)⁻¹) f> = cos k/(k sin k) − 1/k²`, with limit `−1/3`
/// at `z = 0`.
pub fn scalar_pairing(s: &SpectralPoint) -> Result<Complex64> {
    guard_dirichlet(s)?;
    let k = s.k();
    if k.norm() <= SERIES_RADIUS {
        // (k cos k − sin k) / (k² sin k) = Σ_{m≥1} (−1)^m 2m z^(m−1)/(2m+1)! / (sin k/k)
        let z = k * k;
        let mut power = Complex64::new(-1.0, 0.0);
        let mut factorial = 6.0;
        let mut sum = power * (2.0 / factorial);
        for m in 2..SERIES_TERMS {
            let mf = m as f64;
            power *= -z;
            factorial *= (2.0 * mf) * (2.0 * mf + 1.0);
            sum += power * (2.0 * mf / factorial);
        }
        Ok(sum / sin_over_k(k, 1.0))
    } else {
        Ok(k.cos() / (k * k.sin()) - (k * k).inv())
    }
}

/// `1 + z·<l|(−I + z(z − T_DD)⁻¹) f> = k cot k`.
pub fn krein_denominator_analytic(s: &SpectralPoint) -> Result<Complex64> {
    guard_dirichlet(s)?;
    let k = s.k();
    Ok(k.cos() / sin_over_k(k, 1.0))
}

/// Kernel of `(z − T_DN)⁻¹ − (z − T_DD)⁻¹`:
/// `−sin(kx) sin(kξ) / (k sin k cos k)`.
pub fn spectral_difference(pt: KernelPoint, s: &SpectralPoint) -> Result<Complex64> {
    guard_dirichlet(s)?;
    guard_neumann(s)?;
    let k = s.k();
    Ok(-sin_over_k(k, pt.x) * sin_over_k(k, pt.xi) / (sin_over_k(k, 1.0) * k.cos()))
}

/// The first `count` DN eigenvalues `z_n = ((n + ½)π)²`.
pub fn dn_eigenvalues(count: usize) -> Result<Vec<SpectralPoint>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "eigenvalue count must be at least 1".into(),
        ));
    }
    Ok((0..count)
        .map(|n| SpectralPoint::from_k(Complex64::new((n as f64 + 0.5) * PI, 0.0)))
        .collect())
}

/// DD eigenvalues `(mπ)²`, `m ≥ 1`, that are `≤ upper`: the poles of the
/// DD resolvent.
pub fn dd_eigenvalues_below(upper: f64) -> Vec<f64> {
    (1..)
        .map(|m| (m as f64 * PI).powi(2))
        .take_while(|&z| z <= upper)
        .collect()
}

/// `D(z) = k cot k` for real-axis root searches.
pub fn analytic_denominator(z: Complex64) -> Result<Complex64> {
    krein_denominator_analytic(&SpectralPoint::from_z(z))
}

/// `−sin(kx)/sin k` sampled at `xs`.
pub fn sample_deflected_f(s: &SpectralPoint, xs: &[f64]) -> Result<Vector> {
    let values = xs
        .iter()
        .map(|&x| deflected_f(x, s))
        .collect::<Result<Vec<_>>>()?;
    Vector::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    DdStatic,
    DnStatic,
    DiffStatic,
    DdSpectral,
    DnSpectral,
    DiffSpectral,
}

impl KernelKind {
    pub fn is_spectral(self) -> bool {
        matches!(
            self,
            KernelKind::DdSpectral | KernelKind::DnSpectral | KernelKind::DiffSpectral
        )
    }
}

/// One of the six kernels behind a common evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyticKernel {
    pub kind: KernelKind,
}

impl AnalyticKernel {
    pub fn new(kind: KernelKind) -> Self {
        AnalyticKernel { kind }
    }

    /// Spectral kinds require `s`; static kinds ignore it.
    pub fn evaluate(&self, pt: KernelPoint, s: Option<&SpectralPoint>) -> Result<Complex64> {
        let real = |v: f64| Ok(Complex64::new(v, 0.0));
        let need = || {
            s.ok_or_else(|| Error::InvalidArgument("spectral kernel needs a spectral point".into()))
        };
        match self.kind {
            KernelKind::DdStatic => real(g_dd_static(pt)),
            KernelKind::DnStatic => real(g_dn_static(pt)),
            KernelKind::DiffStatic => real(static_difference(pt)),
            KernelKind::DdSpectral => g_dd_spectral(pt, need()?),
            KernelKind::DnSpectral => g_dn_spectral(pt, need()?),
            KernelKind::DiffSpectral => spectral_difference(pt, need()?),
        }
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn pt(x: f64, xi: f64) -> KernelPoint {
        KernelPoint::new(x, xi).unwrap()
    }

    fn at_k(k: f64) -> SpectralPoint {
        SpectralPoint::from_k(Complex64::new(k, 0.0))
    }

    fn close(a: Complex64, b: f64, tol: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() <= tol
    }

    #[test]
    fn kernel_point_range() {
        assert!(KernelPoint::new(0.0, 1.0).is_ok());
        assert_eq!(KernelPoint::new(-0.1, 0.5), Err(Error::OutOfRange(-0.1)));
        assert_eq!(KernelPoint::new(0.5, 1.5), Err(Error::OutOfRange(1.5)));
        assert!(f_z_vector(1.2, &at_k(1.0)).is_err());
    }

    #[test]
    fn static_kernels() {
        assert_eq!(g_dd_static(pt(0.5, 0.5)), 0.25);
        assert_eq!(g_dd_static(pt(0.0, 0.3)), 0.0);
        assert_eq!(g_dd_static(pt(0.25, 0.75)), 0.0625);
        assert_eq!(g_dn_static(pt(0.3, 0.7)), 0.3);
        assert_eq!(g_dn_static(pt(0.0, 0.9)), 0.0);
        assert_eq!(g_dn_static(pt(1.0, 1.0)), 1.0);
        assert!((static_difference(pt(0.3, 0.7)) - 0.21).abs() < 1e-16);
        assert_eq!(static_difference(pt(0.0, 0.4)), 0.0);
        assert_eq!(static_difference(pt(1.0, 1.0)), 1.0);
    }

    #[test]
    fn static_difference_is_dn_minus_dd() {
        for i in 0..=10 {
            for j in 0..=10 {
                let p = pt(i as f64 / 10.0, j as f64 / 10.0);
                let lhs = g_dn_static(p) - g_dd_static(p);
                assert!((lhs - static_difference(p)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dd_spectral_values() {
        let zero = SpectralPoint::from_real(0.0);
        assert_eq!(
            g_dd_spectral(pt(0.5, 0.5), &zero).unwrap(),
            Complex64::new(-0.25, 0.0)
        );
        // −sin²(0.5)/sin 1
        assert!(close(
            g_dd_spectral(pt(0.5, 0.5), &at_k(1.0)).unwrap(),
            -0.273151244921895257,
            1e-15
        ));
        let s = SpectralPoint::from_z(Complex64::new(3.0, 1.0));
        assert_eq!(
            g_dd_spectral(pt(0.25, 0.75), &s).unwrap(),
            g_dd_spectral(pt(0.75, 0.25), &s).unwrap()
        );
    }

    #[test]
    fn dd_pole_is_reported() {
        let s = SpectralPoint::from_real(PI * PI);
        assert!(matches!(
            g_dd_spectral(pt(0.5, 0.5), &s),
            Err(Error::Pole {
                kind: PoleKind::Dirichlet,
                ..
            })
        ));
    }

    #[test]
    fn f_z_values() {
        let s = at_k(1.0);
        assert_eq!(f_z_vector(0.0, &s).unwrap(), Complex64::new(0.0, 0.0));
        assert!(f_z_vector(1.0, &s).unwrap().norm() < 1e-15);
        // 0.5 − sin(0.5)/sin(1)
        assert!(close(
            f_z_vector(0.5, &s).unwrap(),
            -0.0697469636622745612,
            1e-15
        ));
        let tiny = SpectralPoint::from_real(1e-14);
        assert!(f_z_vector(0.3, &tiny).unwrap().norm() < 1e-14);
        assert_eq!(
            f_z_vector(0.3, &SpectralPoint::from_real(0.0))
                .unwrap()
                .norm(),
            0.0
        );
    }

    #[test]
    fn f_z_series_matches_closed_form_at_switch() {
        for &k in &[0.999_999, 1.000_001] {
            let s = at_k(k);
            for &x in &[0.1, 0.5, 0.9] {
                let closed = Complex64::new(x, 0.0) - (s.k() * x).sin() / s.k().sin();
                assert!((f_z_vector(x, &s).unwrap() - closed).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn deflected_values() {
        let s = at_k(1.3);
        assert!(close(deflected_f(1.0, &s).unwrap(), -1.0, 1e-15));
        assert_eq!(deflected_f(0.0, &s).unwrap(), Complex64::new(0.0, 0.0));
        let half_pi = at_k(PI / 2.0);
        assert!(close(
            deflected_f(0.5, &half_pi).unwrap(),
            -std::f64::consts::FRAC_1_SQRT_2,
            1e-15
        ));
    }

    #[test]
    fn scalar_pairing_values() {
        assert!(close(
            scalar_pairing(&at_k(1.0)).unwrap(),
            -0.357907384065669297,
            1e-15
        ));
        assert!(close(
            scalar_pairing(&at_k(PI / 2.0)).unwrap(),
            -0.405284734569351086,
            1e-15
        ));
        assert!(close(
            scalar_pairing(&SpectralPoint::from_real(0.0)).unwrap(),
            -1.0 / 3.0,
            1e-16
        ));
        // mpmath: z = 1e-6
        assert!(close(
            scalar_pairing(&SpectralPoint::from_real(1e-6)).unwrap(),
            -0.333333355555557671957883597,
            1e-16
        ));
        let s = SpectralPoint::from_z(Complex64::new(0.3, 0.2));
        let expected = Complex64::new(-0.340103647570543822, -0.00470840712554213255);
        assert!((scalar_pairing(&s).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn denominator_values() {
        assert!(close(
            krein_denominator_analytic(&at_k(1.0)).unwrap(),
            0.642092615934330703,
            1e-15
        ));
        assert!(krein_denominator_analytic(&at_k(PI / 2.0)).unwrap().norm() < 1e-15);
        assert_eq!(
            krein_denominator_analytic(&SpectralPoint::from_real(0.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn spectral_difference_values() {
        assert!(close(
            spectral_difference(pt(0.5, 0.5), &at_k(1.0)).unwrap(),
            -0.505552617405555859,
            1e-15
        ));
        assert_eq!(
            spectral_difference(pt(0.0, 0.7), &at_k(2.0))
                .unwrap()
                .norm(),
            0.0
        );
        let zero = SpectralPoint::from_real(0.0);
        assert!(close(
            spectral_difference(pt(0.3, 0.8), &zero).unwrap(),
            -0.24,
            1e-16
        ));
        assert!(matches!(
            spectral_difference(pt(0.5, 0.5), &at_k(PI / 2.0)),
            Err(Error::Pole {
                kind: PoleKind::Neumann,
                ..
            })
        ));
        assert!(matches!(
            spectral_difference(pt(0.5, 0.5), &at_k(PI)),
            Err(Error::Pole {
                kind: PoleKind::Dirichlet,
                ..
            })
        ));
    }

    #[test]
    fn dn_eigenvalue_list() {
        let eigs = dn_eigenvalues(3).unwrap();
        assert!((eigs[0].z().re - 2.467401100272339655).abs() < 1e-14);
        assert!((eigs[1].z().re - 22.20660990245105689).abs() < 1e-13);
        assert!((eigs[2].z().re - 61.68502750680849137).abs() < 1e-12);
        for s in &eigs {
            assert!(krein_denominator_analytic(s).unwrap().norm() <= 1e-12);
        }
        assert!(dn_eigenvalues(0).is_err());
    }

    #[test]
    fn dd_pole_list() {
        let poles = dd_eigenvalues_below(40.0);
        assert_eq!(poles.len(), 2);
        assert!((poles[1] - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn kernel_dispatch() {
        let s = at_k(1.0);
        let p = pt(0.5, 0.5);
        let dd = AnalyticKernel::new(KernelKind::DdSpectral)
            .evaluate(p, Some(&s))
            .unwrap();
        let dn = AnalyticKernel::new(KernelKind::DnSpectral)
            .evaluate(p, Some(&s))
            .unwrap();
        let diff = AnalyticKernel::new(KernelKind::DiffSpectral)
            .evaluate(p, Some(&s))
            .unwrap();
        assert!((dn - dd - diff).norm() < 1e-15);
        assert!(AnalyticKernel::new(KernelKind::DnSpectral)
            .evaluate(p, None)
            .is_err());
        assert_eq!(
            AnalyticKernel::new(KernelKind::DnStatic)
                .evaluate(p, None)
                .unwrap(),
            Complex64::new(0.5, 0.0)
        );
    }
}
