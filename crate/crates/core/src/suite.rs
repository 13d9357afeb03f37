//! Named invariant checks, run together by `krein verify`.
//!
//! Every check is deterministic: random instances come from fixed seeds.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::discrete::{
    build_pair, discrete_new_eigenvalues, inverse_difference, resolvent, DiscretePair,
};
use crate::error::{Error, Result};
use crate::krein::{
    default_hit_tolerance, denominator_roots, find_new_eigenvalues, resolvent_difference,
    SpectralPoint,
};
use crate::operator::{
    invert, outer, pair, rank_estimate, singular_values, DenseOperator, RankOneForm,
};
use crate::quadrature::integrate;
use crate::rank_one::{
    default_tolerance, null_space_certificate, perturbed_inverse, solve_perturbed, PerturbedInverse,
};
use crate::recovery::{
    bilinear_value, choose_probe, factor_free_hit_tolerance, recover_factors,
    resolvent_difference_factor_free, Probe,
};
use crate::sample::{
    self, random_functional, random_operator, random_vector, regular_instance, singular_instance,
};
use crate::testbed::{
    analytic_denominator, dd_eigenvalues_below, deflected_f, dn_eigenvalues, f_z_vector,
    g_dd_spectral, g_dn_spectral, krein_denominator_analytic, scalar_pairing, spectral_difference,
    AnalyticKernel, KernelKind, KernelPoint,
};

/// Outcome of one invariant. `measured` is NaN when the check errored.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl Check {
    fn bound(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check {
            name,
            passed: measured <= threshold,
            measured,
            threshold,
        }
    }
}

type CheckFn = fn() -> Result<Check>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("outer_action", outer_action),
    ("inverse_residual", inverse_residual),
    ("outer_rank_at_most_one", outer_rank_at_most_one),
    ("sherman_morrison_regular", sherman_morrison_regular),
    ("sherman_morrison_singular", sherman_morrison_singular),
    ("perturbed_solve_consistency", perturbed_solve_consistency),
    ("telescoping_identity", telescoping_identity),
    ("gauge_invariance", gauge_invariance),
    (
        "static_kernel_difference_n400",
        static_kernel_difference_n400,
    ),
    ("exact_rank_one_up_to_n1000", exact_rank_one),
    ("discrete_sherman_morrison", discrete_sherman_morrison),
    (
        "inverse_difference_convergence",
        inverse_difference_convergence,
    ),
    ("krein_factor_path_n200", krein_factor_path_n200),
    ("krein_factor_free_path_n200", krein_factor_free_path_n200),
    ("denominator_identity", denominator_identity),
    ("scalar_pairing_quadrature", scalar_pairing_quadrature),
    ("analytic_denominator_roots", analytic_denominator_roots),
    (
        "discrete_denominator_root_n1000",
        discrete_denominator_root_n1000,
    ),
    ("discrete_eigenpair_residual", discrete_eigenpair_residual),
    ("spectral_kernel_convergence", spectral_kernel_convergence),
    ("probe_independence_dim16", probe_independence_dim16),
    ("branch_independence", branch_independence),
    ("kernel_symmetry_and_boundary", kernel_symmetry_and_boundary),
    ("f_z_ode_residual", f_z_ode_residual),
    ("dn_boundary_condition", dn_boundary_condition),
    (
        "f_z_matches_discrete_resolvent",
        f_z_matches_discrete_resolvent,
    ),
];

/// Names of all checks, in run order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(name, _)| *name).collect()
}

/// Runs every check. An error inside a check counts as a failure.
pub fn run_all() -> Vec<Check> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            check().unwrap_or(Check {
                name,
                passed: false,
                measured: f64::NAN,
                threshold: f64::NAN,
            })
        })
        .collect()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn rel_max_diff(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    Ok(a.sub(b)?.max_norm() / b.max_norm())
}

fn outer_action() -> Result<Check> {
    let mut rng = sample::rng(1);
    let mut worst: f64 = 0.0;
    for dim in 1..=12 {
        let f = random_vector(&mut rng, dim)?;
        let l = random_functional(&mut rng, dim)?;
        let u = random_vector(&mut rng, dim)?;
        let direct = f.scale(pair(&l, &u)?);
        let via = outer(&f, &l)?.apply(&u)?;
        worst = worst.max(via.sub(&direct)?.norm() / (f.norm() * l.norm() * u.norm()));
    }
    Ok(Check::bound("outer_action", worst, 1e-14))
}

fn inverse_residual() -> Result<Check> {
    let mut rng = sample::rng(2);
    let mut worst: f64 = 0.0;
    for dim in 1..=32 {
        let a = random_operator(&mut rng, dim)?;
        let a_inv = invert(&a)?;
        let id = DenseOperator::identity(dim)?;
        worst = worst
            .max(a.compose(&a_inv)?.sub(&id)?.max_norm())
            .max(a_inv.compose(&a)?.sub(&id)?.max_norm());
    }
    Ok(Check::bound("inverse_residual", worst, 1e-10))
}

fn outer_rank_at_most_one() -> Result<Check> {
    let mut rng = sample::rng(3);
    let mut worst = 0;
    for dim in 1..=16 {
        let m = outer(
            &random_vector(&mut rng, dim)?,
            &random_functional(&mut rng, dim)?,
        )?;
        worst = worst.max(rank_estimate(&m, 1e-10)?);
    }
    worst = worst.max(rank_estimate(&DenseOperator::zeros(4)?, 1e-10)?);
    Ok(Check::bound("outer_rank_at_most_one", worst as f64, 1.0))
}

fn sherman_morrison_regular() -> Result<Check> {
    let mut rng = sample::rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let inst = regular_instance(&mut rng, 8, 0.1)?;
        let tol = default_tolerance(&inst.a_inv, &inst.form)?;
        let formula = perturbed_inverse(&inst.a_inv, &inst.form, tol)?
            .inverse(&inst.a_inv)
            .ok_or_else(|| {
                Error::InvalidArgument("regular instance took the singular branch".into())
            })?;
        let brute = invert(&inst.perturbed()?)?;
        worst = worst.max(rel_max_diff(&formula, &brute)?);
    }
    Ok(Check::bound("sherman_morrison_regular", worst, 1e-10))
}

/// `‖B·A⁻¹f‖ / (‖B‖₂‖A⁻¹f‖)` on crafted singular instances, which must also
/// take the singular branch and pass the null-space certificate.
fn sherman_morrison_singular() -> Result<Check> {
    let mut rng = sample::rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let inst = singular_instance(&mut rng, 8)?;
        let tol = default_tolerance(&inst.a_inv, &inst.form)?;
        let PerturbedInverse::Singular { null_vector, .. } =
            perturbed_inverse(&inst.a_inv, &inst.form, tol)?
        else {
            return Ok(Check::bound(
                "sherman_morrison_singular",
                f64::INFINITY,
                1e-9,
            ));
        };
        if !null_space_certificate(&inst.a_inv, &inst.form, &null_vector, 1e-9)? {
            return Ok(Check::bound(
                "sherman_morrison_singular",
                f64::INFINITY,
                1e-9,
            ));
        }
        let b = inst.perturbed()?;
        let b_norm = singular_values(&b)[0];
        worst = worst.max(b.apply(&null_vector)?.norm() / (b_norm * null_vector.norm()));
    }
    Ok(Check::bound("sherman_morrison_singular", worst, 1e-9))
}

fn perturbed_solve_consistency() -> Result<Check> {
    let mut rng = sample::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let inst = regular_instance(&mut rng, 8, 0.1)?;
        let w = random_vector(&mut rng, 8)?;
        let tol = default_tolerance(&inst.a_inv, &inst.form)?;
        let v = solve_perturbed(&inst.a_inv, &inst.form, &w, tol)?;
        let brute = invert(&inst.perturbed()?)?.apply(&w)?;
        worst = worst.max(v.sub(&brute)?.norm() / brute.norm());
    }
    Ok(Check::bound("perturbed_solve_consistency", worst, 1e-9))
}

/// `R₂ − R₁ = R₂(T₂ − T₁)R₁` on random pairs.
fn telescoping_identity() -> Result<Check> {
    let mut rng = sample::rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let t1 = random_operator(&mut rng, 6)?;
        let t2 = random_operator(&mut rng, 6)?;
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.5..3.0));
        let r1 = resolvent(&t1, z)?;
        let r2 = resolvent(&t2, z)?;
        let lhs = r2.sub(&r1)?;
        let rhs = r2.compose(&t2.sub(&t1)?)?.compose(&r1)?;
        worst = worst.max(rel_max_diff(&rhs, &lhs)?);
    }
    Ok(Check::bound("telescoping_identity", worst, 1e-10))
}

/// Rescaling `f → αf`, `l → l/α` leaves the perturbed inverse and the
/// resolvent difference unchanged.
fn gauge_invariance() -> Result<Check> {
    let mut rng = sample::rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let inst = regular_instance(&mut rng, 6, 0.1)?;
        let alpha = Complex64::new(rng.gen_range(0.5..4.0), rng.gen_range(-2.0..2.0));
        let gauged = inst.form.regauge(alpha)?;
        let tol = default_tolerance(&inst.a_inv, &inst.form)?;
        let lhs = perturbed_inverse(&inst.a_inv, &inst.form, tol)?.inverse(&inst.a_inv);
        let rhs = perturbed_inverse(&inst.a_inv, &gauged, tol)?.inverse(&inst.a_inv);
        if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
            worst = worst.max(rel_max_diff(&lhs, &rhs)?);
        } else {
            worst = f64::INFINITY;
        }

        let z = Complex64::new(rng.gen_range(-2.0..2.0), 1.0);
        let r1 = resolvent(&inst.a, z)?;
        let d1 = resolvent_difference(&r1, z, &inst.form, 0.0)?.materialize()?;
        let d2 = resolvent_difference(&r1, z, &gauged, 0.0)?.materialize()?;
        worst = worst.max(rel_max_diff(&d2, &d1)?);
    }
    Ok(Check::bound("gauge_invariance", worst, 1e-10))
}

/// `max |D_ij/h − x_i x_j|` for the discrete inverse difference `D`.
pub fn static_kernel_deviation(pair: &DiscretePair) -> Result<f64> {
    let d = inverse_difference(pair)?;
    let h = pair.grid.h();
    let x = pair.grid.nodes();
    let mut worst: f64 = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            worst = worst.max((d.entry(i, j) / h - xi * xj).norm());
        }
    }
    Ok(worst)
}

fn static_kernel_difference_n400() -> Result<Check> {
    let pair = build_pair(400)?;
    Ok(Check::bound(
        "static_kernel_difference_n400",
        static_kernel_deviation(&pair)?,
        5.0 * pair.grid.h(),
    ))
}

/// `σ₂/σ₁` of the discrete inverse difference.
pub fn rank_one_ratio(n: usize) -> Result<f64> {
    let sv = singular_values(&inverse_difference(&build_pair(n)?)?);
    Ok(sv[1] / sv[0])
}

fn exact_rank_one() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n in [200, 500, 1000] {
        worst = worst.max(rank_one_ratio(n)?);
    }
    Ok(Check::bound("exact_rank_one_up_to_n1000", worst, 1e-10))
}

fn discrete_sherman_morrison() -> Result<Check> {
    let pair = build_pair(200)?;
    let dd_inv = invert(&pair.t_dd)?;
    let form = pair.boundary_form()?;
    let tol = default_tolerance(&dd_inv, &form)?;
    let Some(formula) = perturbed_inverse(&dd_inv, &form, tol)?.inverse(&dd_inv) else {
        return Ok(Check::bound(
            "discrete_sherman_morrison",
            f64::INFINITY,
            1e-8,
        ));
    };
    let brute = invert(&pair.t_dn)?;
    Ok(Check::bound(
        "discrete_sherman_morrison",
        rel_max_diff(&formula, &brute)?,
        1e-8,
    ))
}

/// Below this the static-kernel deviation is rounding noise.
pub const STATIC_NOISE_FLOOR: f64 = 1e-10;

/// Deviations at n = 100, 200, 400 either decrease or sit at the rounding
/// floor. The ghost-node pair reproduces `h·x_i x_j` exactly, so in practice
/// the floor is what is observed. `measured` is the largest deviation.
fn inverse_difference_convergence() -> Result<Check> {
    let devs = [100, 200, 400]
        .into_iter()
        .map(|n| static_kernel_deviation(&build_pair(n)?))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let largest = devs.iter().copied().fold(0.0, f64::max);
    Ok(Check {
        name: "inverse_difference_convergence",
        passed: decreasing || largest <= STATIC_NOISE_FLOOR,
        measured: largest,
        threshold: STATIC_NOISE_FLOOR,
    })
}

/// Ten real points in `(−5, 50)` at least `0.5` from both discrete spectra
/// and ten complex points with `|Im z| ≥ 0.5`.
pub fn krein_sample_points(pair: &DiscretePair, seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = sample::rng(seed);
    let mut spectra = pair.dd_eigenvalues();
    spectra.extend(discrete_new_eigenvalues(pair, 10.min(pair.grid.n()))?);
    let mut points = Vec::with_capacity(20);
    while points.len() < 10 {
        let x: f64 = rng.gen_range(-5.0..50.0);
        if spectra.iter().all(|&e| (x - e).abs() >= 0.5) {
            points.push(Complex64::new(x, 0.0));
        }
    }
    while points.len() < 20 {
        let im: f64 = rng.gen_range(0.5..10.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        points.push(Complex64::new(rng.gen_range(-5.0..50.0), sign * im));
    }
    Ok(points)
}

/// Worst entrywise gap between the Krein formula and the brute-force
/// resolvent difference for the discrete pair, over `points`.
pub fn krein_deviation(
    pair: &DiscretePair,
    points: &[Complex64],
    factor_free: bool,
) -> Result<f64> {
    let d = inverse_difference(pair)?;
    let probe = choose_probe(&d, 0.0)?;
    let form = recover_factors(&d, &probe)?;
    let mut worst: f64 = 0.0;
    for &z in points {
        let r1 = resolvent(&pair.t_dd, z)?;
        let brute = resolvent(&pair.t_dn, z)?.sub(&r1)?;
        let krein = if factor_free {
            let tol = factor_free_hit_tolerance(z, &d, &probe)?;
            resolvent_difference_factor_free(&r1, z, &d, &probe, tol)?
        } else {
            resolvent_difference(&r1, z, &form, default_hit_tolerance(z, &form))?
        };
        worst = worst.max(krein.materialize()?.sub(&brute)?.max_norm());
    }
    Ok(worst)
}

fn krein_factor_path_n200() -> Result<Check> {
    let pair = build_pair(200)?;
    let points = krein_sample_points(&pair, 9)?;
    Ok(Check::bound(
        "krein_factor_path_n200",
        krein_deviation(&pair, &points, false)?,
        1e-8,
    ))
}

fn krein_factor_free_path_n200() -> Result<Check> {
    let pair = build_pair(200)?;
    let points = krein_sample_points(&pair, 9)?;
    Ok(Check::bound(
        "krein_factor_free_path_n200",
        krein_deviation(&pair, &points, true)?,
        1e-8,
    ))
}

/// 50 points spread over small, moderate and complex `z`, off the DD poles.
pub fn analytic_sample_points(seed: u64) -> Vec<SpectralPoint> {
    let mut rng = sample::rng(seed);
    let mut points = Vec::with_capacity(50);
    while points.len() < 50 {
        let z = match points.len() % 3 {
            0 => Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            1 => Complex64::new(rng.gen_range(-20.0..80.0), 0.0),
            _ => Complex64::new(rng.gen_range(-20.0..80.0), rng.gen_range(-10.0..10.0)),
        };
        let s = SpectralPoint::from_z(z);
        if (s.k().sin()).norm() > 1e-3 && (s.k().cos()).norm() > 1e-3 {
            points.push(s);
        }
    }
    points
}

fn denominator_identity() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for s in analytic_sample_points(10) {
        let lhs = one() + s.z() * scalar_pairing(&s)?;
        let rhs = krein_denominator_analytic(&s)?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }
    Ok(Check::bound("denominator_identity", worst, 1e-12))
}

/// `<l|S f> = ∫ ξ·(−sin kξ/sin k) dξ` by quadrature against the closed form.
fn scalar_pairing_quadrature() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for s in analytic_sample_points(11).into_iter().take(20) {
        let closed = scalar_pairing(&s)?;
        let quad = integrate(
            |x| x * deflected_f(x, &s).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            0.0,
            1.0,
            1e-13,
            1e-13,
        );
        worst = worst.max((quad - closed).norm() / closed.norm().max(1.0));
    }
    Ok(Check::bound("scalar_pairing_quadrature", worst, 1e-10))
}

/// Root search on `k cot k` over `[0, (count·π)²]`, with the DD poles cut
/// out of the interval.
pub fn analytic_roots(count: usize) -> Result<Vec<f64>> {
    let upper = (count as f64 * PI).powi(2);
    let exclusions = dd_eigenvalues_below(upper);
    Ok(denominator_roots(analytic_denominator, (0.0, upper), count, &exclusions)?.roots)
}

fn analytic_denominator_roots() -> Result<Check> {
    let roots = analytic_roots(3)?;
    let expected = dn_eigenvalues(3)?;
    if roots.len() != 3 {
        return Ok(Check::bound(
            "analytic_denominator_roots",
            f64::INFINITY,
            1e-9,
        ));
    }
    let worst = roots
        .iter()
        .zip(&expected)
        .map(|(r, e)| (r - e.z().re).abs() / e.z().re)
        .fold(0.0, f64::max);
    Ok(Check::bound("analytic_denominator_roots", worst, 1e-9))
}

/// First root of the discrete denominator on `[0.1, 9]`, which lies below
/// the first DD eigenvalue.
pub fn discrete_first_root(pair: &DiscretePair) -> Result<Option<f64>> {
    let exclusions = pair.dd_eigenvalues();
    let search = denominator_roots(|z| pair.denominator(z), (0.1, 9.0), 1, &exclusions)?;
    Ok(search.roots.first().copied())
}

fn discrete_denominator_root_n1000() -> Result<Check> {
    let pair = build_pair(1000)?;
    let target = (PI / 2.0).powi(2);
    let measured =
        discrete_first_root(&pair)?.map_or(f64::INFINITY, |r| (r - target).abs() / target);
    Ok(Check::bound(
        "discrete_denominator_root_n1000",
        measured,
        0.01,
    ))
}

/// `‖T_DN v − z v‖ / (‖T_DN‖∞·‖v‖)` for the eigenpairs produced by the
/// denominator roots of the n = 1000 pair.
fn discrete_eigenpair_residual() -> Result<Check> {
    let pair = build_pair(1000)?;
    let exclusions = pair.dd_eigenvalues();
    let search = find_new_eigenvalues(
        |z| pair.denominator(z),
        |z| pair.deflected_f(z),
        Some(&pair.t_dn),
        (0.1, 70.0),
        3,
        &exclusions,
    )?;
    if search.pairs.len() != 3 {
        return Ok(Check::bound(
            "discrete_eigenpair_residual",
            f64::INFINITY,
            1e-6,
        ));
    }
    let norm = pair.t_dn.row_sum_norm();
    let worst = search
        .pairs
        .iter()
        .map(|p| p.residual.unwrap_or(f64::INFINITY) / norm)
        .fold(0.0, f64::max);
    Ok(Check::bound("discrete_eigenpair_residual", worst, 1e-6))
}

/// `max |(R_DN − R_DD)_ij / h − spectral_difference(x_i, x_j)|` at `z`.
pub fn spectral_kernel_deviation(n: usize, z: Complex64) -> Result<f64> {
    let pair = build_pair(n)?;
    let diff = resolvent(&pair.t_dn, z)?.sub(&resolvent(&pair.t_dd, z)?)?;
    let s = SpectralPoint::from_z(z);
    let h = pair.grid.h();
    let x = pair.grid.nodes();
    let mut worst: f64 = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            let exact = spectral_difference(KernelPoint::new(xi, xj)?, &s)?;
            worst = worst.max((diff.entry(i, j) / h - exact).norm());
        }
    }
    Ok(worst)
}

fn spectral_kernel_convergence() -> Result<Check> {
    let z = one();
    let coarse = spectral_kernel_deviation(400, z)?;
    let fine = spectral_kernel_deviation(800, z)?;
    Ok(Check {
        name: "spectral_kernel_convergence",
        passed: fine <= 5e-3 && fine < coarse,
        measured: fine,
        threshold: 5e-3,
    })
}

/// A rank-one operator of dimension 16 from seeded factors.
pub fn seeded_rank_one(seed: u64, dim: usize) -> Result<(RankOneForm, DenseOperator)> {
    let mut rng = sample::rng(seed);
    let form = RankOneForm::new(
        random_vector(&mut rng, dim)?,
        random_functional(&mut rng, dim)?,
    )?;
    let d = form.materialize();
    Ok((form, d))
}

/// Worst disagreement over all admissible coordinate probes, of the
/// recovered outer product with `D` and of `bilinear_value` with `<l|S f>`.
pub fn probe_independence(dim: usize, seed: u64) -> Result<f64> {
    let (form, d) = seeded_rank_one(seed, dim)?;
    let mut rng = sample::rng(seed + 1);
    let s = random_operator(&mut rng, dim)?;
    let direct = pair(&form.l, &s.apply(&form.f)?)?;
    let mut worst: f64 = 0.0;
    for row in 0..dim {
        for col in 0..dim {
            let probe = match Probe::coordinate(&d, row, col) {
                Ok(p) => p,
                Err(Error::InadmissibleProbe { .. }) => continue,
                Err(e) => return Err(e),
            };
            let recovered = recover_factors(&d, &probe)?.materialize();
            worst = worst.max(rel_max_diff(&recovered, &d)?);
            let value = bilinear_value(&d, &s, &probe)?;
            worst = worst.max((value - direct).norm() / direct.norm().max(1.0));
        }
    }
    Ok(worst)
}

fn probe_independence_dim16() -> Result<Check> {
    Ok(Check::bound(
        "probe_independence_dim16",
        probe_independence(16, 12)?,
        1e-10,
    ))
}

/// Every analytic spectral quantity at `k` against `−k`, over 100 points.
pub fn branch_deviation(seed: u64) -> Result<f64> {
    let mut rng = sample::rng(seed);
    let pts = [
        KernelPoint::new(0.3, 0.7)?,
        KernelPoint::new(0.5, 0.5)?,
        KernelPoint::new(0.9, 0.2)?,
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let z = Complex64::new(rng.gen_range(-30.0..100.0), rng.gen_range(-20.0..20.0));
        let a = SpectralPoint::from_z(z);
        let b = a.other_branch();
        if a.k().sin().norm() < 1e-3 || a.k().cos().norm() < 1e-3 {
            continue;
        }
        count += 1;
        let mut values: Vec<(Complex64, Complex64)> = vec![
            (scalar_pairing(&a)?, scalar_pairing(&b)?),
            (
                krein_denominator_analytic(&a)?,
                krein_denominator_analytic(&b)?,
            ),
        ];
        for &pt in &pts {
            values.push((g_dd_spectral(pt, &a)?, g_dd_spectral(pt, &b)?));
            values.push((g_dn_spectral(pt, &a)?, g_dn_spectral(pt, &b)?));
            values.push((spectral_difference(pt, &a)?, spectral_difference(pt, &b)?));
            values.push((f_z_vector(pt.x(), &a)?, f_z_vector(pt.x(), &b)?));
            values.push((deflected_f(pt.x(), &a)?, deflected_f(pt.x(), &b)?));
        }
        for (u, v) in values {
            worst = worst.max((u - v).norm() / u.norm().max(1.0));
        }
    }
    Ok(worst)
}

fn branch_independence() -> Result<Check> {
    Ok(Check::bound(
        "branch_independence",
        branch_deviation(13)?,
        1e-14,
    ))
}

/// Symmetry in `(x, ξ)` of every kernel, and the Dirichlet condition at
/// `x = 0` (both kernels) and `x = 1` (DD kernels).
fn kernel_symmetry_and_boundary() -> Result<Check> {
    let spectral = [
        SpectralPoint::from_real(1.0),
        SpectralPoint::from_z(Complex64::new(5.0, 2.0)),
    ];
    let kinds = [
        KernelKind::DdStatic,
        KernelKind::DnStatic,
        KernelKind::DiffStatic,
        KernelKind::DdSpectral,
        KernelKind::DnSpectral,
        KernelKind::DiffSpectral,
    ];
    let mut worst: f64 = 0.0;
    for kind in kinds {
        let kernel = AnalyticKernel::new(kind);
        for s in &spectral {
            let s = kind.is_spectral().then_some(s);
            for i in 0..=10 {
                for j in 0..=10 {
                    let pt = KernelPoint::new(i as f64 / 10.0, j as f64 / 10.0)?;
                    let v = kernel.evaluate(pt, s)?;
                    worst = worst.max((v - kernel.evaluate(pt.swapped(), s)?).norm());
                }
                let xi = i as f64 / 10.0;
                worst = worst.max(kernel.evaluate(KernelPoint::new(0.0, xi)?, s)?.norm());
                if matches!(kind, KernelKind::DdStatic | KernelKind::DdSpectral) {
                    worst = worst.max(kernel.evaluate(KernelPoint::new(1.0, xi)?, s)?.norm());
                }
            }
        }
    }
    Ok(Check::bound("kernel_symmetry_and_boundary", worst, 1e-14))
}

/// `f_z'' + z f_z = z x` with `f_z(0) = f_z(1) = 0`, by central differences.
fn f_z_ode_residual() -> Result<Check> {
    let delta = 2e-4;
    let mut worst: f64 = 0.0;
    for z in [
        one(),
        Complex64::new(0.3, 0.2),
        Complex64::new(20.0, 0.0),
        Complex64::new(-4.0, 3.0),
    ] {
        let s = SpectralPoint::from_z(z);
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let f = |t: f64| f_z_vector(t, &s);
            let second = (f(x + delta)? - f(x)? * 2.0 + f(x - delta)?) / (delta * delta);
            let residual = second + z * f(x)? - z * x;
            worst = worst.max(residual.norm() / z.norm().max(1.0));
        }
        worst = worst
            .max(f_z_vector(0.0, &s)?.norm())
            .max(f_z_vector(1.0, &s)?.norm());
    }
    Ok(Check::bound("f_z_ode_residual", worst, 1e-6))
}

/// `∂G_DN/∂x (1, ξ) = 0` by a second-order one-sided difference.
fn dn_boundary_condition() -> Result<Check> {
    let delta = 1e-4;
    let mut worst: f64 = 0.0;
    for z in [
        one(),
        Complex64::new(10.0, 0.0),
        Complex64::new(-3.0, 2.0),
        Complex64::new(0.0, 0.0),
    ] {
        let s = SpectralPoint::from_z(z);
        for j in 1..10 {
            let xi = j as f64 / 10.0;
            let g = |x: f64| -> Result<Complex64> { g_dn_spectral(KernelPoint::new(x, xi)?, &s) };
            let slope =
                (g(1.0)? * 3.0 - g(1.0 - delta)? * 4.0 + g(1.0 - 2.0 * delta)?) / (2.0 * delta);
            worst = worst.max(slope.norm());
        }
    }
    Ok(Check::bound("dn_boundary_condition", worst, 1e-6))
}

/// `f_z = z(z − T_DD)⁻¹ f` against the discrete resolvent applied to the
/// samples of `x`. The DD scheme is second order.
fn f_z_matches_discrete_resolvent() -> Result<Check> {
    let pair = build_pair(400)?;
    let mut worst: f64 = 0.0;
    for z in [one(), Complex64::new(5.0, 2.0), Complex64::new(30.0, 0.0)] {
        let s = SpectralPoint::from_z(z);
        let discrete = pair.apply_dd_resolvent(z, &pair.f_vec)?.scale(z);
        for (i, &x) in pair.grid.nodes().iter().enumerate() {
            worst = worst.max((discrete.get(i) - f_z_vector(x, &s)?).norm());
        }
    }
    Ok(Check::bound("f_z_matches_discrete_resolvent", worst, 1e-4))
}
