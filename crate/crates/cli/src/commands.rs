use anyhow::{bail, Result};
use clap::ValueEnum;
use krein_core::discrete::{build_pair, discrete_new_eigenvalues, inverse_difference, resolvent};
use krein_core::krein::{default_hit_tolerance, resolvent_difference, SpectralPoint};
use krein_core::operator::singular_values;
use krein_core::rank_one::{
    default_tolerance, null_space_certificate, perturbed_inverse, solve_perturbed, PerturbedInverse,
};
use krein_core::recovery::{
    choose_probe, factor_free_hit_tolerance, recover_factors, resolvent_difference_factor_free,
};
use krein_core::sample::{self, regular_instance, singular_instance};
use krein_core::suite::{analytic_roots, run_all};
use krein_core::testbed::{dn_eigenvalues, AnalyticKernel, KernelKind, KernelPoint};
use krein_core::{invert, Complex64, DenseOperator, RankOneForm, Vector};

use crate::matrix_file::Problem;
use crate::output::{unit_grid, OutputRecord, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Dd,
    Dn,
    Diff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Analytic,
    Denominator,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Analytic,
    Discrete,
}

fn fmt_z(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        bail!("--grid-m must be at least 2");
    }
    Ok(())
}

pub fn greens(which: Which, z: Option<Complex64>, grid_m: usize) -> Result<OutputRecord> {
    check_grid(grid_m)?;
    let kind = match (which, z.is_some()) {
        (Which::Dd, false) => KernelKind::DdStatic,
        (Which::Dn, false) => KernelKind::DnStatic,
        (Which::Diff, false) => KernelKind::DiffStatic,
        (Which::Dd, true) => KernelKind::DdSpectral,
        (Which::Dn, true) => KernelKind::DnSpectral,
        (Which::Diff, true) => KernelKind::DiffSpectral,
    };
    let kernel = AnalyticKernel::new(kind);
    let point = z.map(SpectralPoint::from_z);
    let mut rec = OutputRecord::new("greens", &["x", "xi", "re", "im"])
        .param("which", format!("{which:?}").to_lowercase())
        .param("grid_m", grid_m);
    if let Some(z) = z {
        rec = rec.param("z", fmt_z(z));
    }
    let grid = unit_grid(grid_m);
    for (i, &x) in grid.iter().enumerate() {
        for (j, &xi) in grid.iter().enumerate() {
            let v = kernel.evaluate(KernelPoint::new(x, xi)?, point.as_ref())?;
            rec.rows
                .push(Row::full(format!("{i}:{j}"), &[x, xi, v.re, v.im]));
        }
    }
    Ok(rec)
}

pub fn eigs(count: usize, method: Method, n: Option<usize>) -> Result<OutputRecord> {
    if count == 0 {
        bail!("--count must be at least 1");
    }
    let mut rec = OutputRecord::new("eigs", &["index", "z", "k"])
        .param("count", count)
        .param("method", format!("{method:?}").to_lowercase());
    let values: Vec<f64> = match method {
        Method::Analytic => dn_eigenvalues(count)?.iter().map(|p| p.z().re).collect(),
        Method::Denominator => {
            let roots = analytic_roots(count)?;
            if roots.len() != count {
                bail!("root search found {} of {count} eigenvalues", roots.len());
            }
            roots
        }
        Method::Discrete => {
            let Some(n) = n else {
                bail!("--n is required for the discrete method")
            };
            rec = rec.param("n", n);
            discrete_new_eigenvalues(&build_pair(n)?, count)?
        }
    };
    for (i, z) in values.into_iter().enumerate() {
        rec.rows
            .push(Row::full(i.to_string(), &[i as f64, z, z.sqrt()]));
    }
    Ok(rec)
}

pub fn resolvent_diff(
    z: Complex64,
    source: Source,
    n: usize,
    grid_m: usize,
) -> Result<OutputRecord> {
    check_grid(grid_m)?;
    let mut rec = OutputRecord::new("resolvent-diff", &["x", "xi", "re", "im", "deviation"])
        .param("z", fmt_z(z))
        .param("source", format!("{source:?}").to_lowercase())
        .param("grid_m", grid_m);
    let width = rec.width();
    match source {
        Source::Analytic => {
            let point = SpectralPoint::from_z(z);
            let kernel = AnalyticKernel::new(KernelKind::DiffSpectral);
            let grid = unit_grid(grid_m);
            for (i, &x) in grid.iter().enumerate() {
                for (j, &xi) in grid.iter().enumerate() {
                    let v = kernel.evaluate(KernelPoint::new(x, xi)?, Some(&point))?;
                    rec.rows.push(Row::new(
                        format!("{i}:{j}"),
                        vec![Some(x), Some(xi), Some(v.re), Some(v.im), None],
                    ));
                }
            }
        }
        Source::Discrete => {
            rec = rec.param("n", n);
            let pair = build_pair(n)?;
            let d = inverse_difference(&pair)?;
            let probe = choose_probe(&d, 0.0)?;
            let form = recover_factors(&d, &probe)?;
            let r1 = resolvent(&pair.t_dd, z)?;
            let brute = resolvent(&pair.t_dn, z)?.sub(&r1)?;
            let krein = resolvent_difference(&r1, z, &form, default_hit_tolerance(z, &form))?
                .materialize()?;
            let tol = factor_free_hit_tolerance(z, &d, &probe)?;
            let free = resolvent_difference_factor_free(&r1, z, &d, &probe, tol)?.materialize()?;

            let h = pair.grid.h();
            let nodes = pair.grid.nodes();
            let picks: Vec<usize> = (0..grid_m)
                .map(|i| ((i as f64 / (grid_m - 1) as f64) * (n - 1) as f64).round() as usize)
                .collect();
            for &i in &picks {
                for &j in &picks {
                    let v = krein.entry(i, j);
                    let dev = (v - brute.entry(i, j)).norm();
                    let kernel = v / h;
                    rec.rows.push(Row::full(
                        format!("{i}:{j}"),
                        &[nodes[i], nodes[j], kernel.re, kernel.im, dev],
                    ));
                }
            }
            let factor_dev = krein.sub(&brute)?.max_norm();
            let free_dev = free.sub(&brute)?.max_norm();
            rec.rows
                .push(Row::single("max_deviation_factor", width, 4, factor_dev));
            rec.rows
                .push(Row::single("max_deviation_factor_free", width, 4, free_dev));
        }
    }
    Ok(rec)
}

pub enum PerturbInput {
    File(Problem),
    Random {
        dim: usize,
        seed: u64,
        singular: bool,
    },
}

pub fn perturb(input: PerturbInput) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("perturb", &["re", "im"]);
    let (a, a_inv, form) = match input {
        PerturbInput::File(p) => {
            rec = rec.param("source", "file");
            let a_inv = invert(&p.a)?;
            (p.a, a_inv, p.form)
        }
        PerturbInput::Random {
            dim,
            seed,
            singular,
        } => {
            if dim == 0 {
                bail!("--dim must be at least 1");
            }
            rec = rec
                .param(
                    "source",
                    if singular {
                        "random-singular"
                    } else {
                        "random"
                    },
                )
                .param("dim", dim)
                .param("seed", seed);
            let mut rng = sample::rng(seed);
            let inst = if singular {
                singular_instance(&mut rng, dim)?
            } else {
                regular_instance(&mut rng, dim, 0.1)?
            };
            (inst.a, inst.a_inv, inst.form)
        }
    };
    let b = a.sub(&form.materialize())?;
    let tol = default_tolerance(&a_inv, &form)?;
    let result = perturbed_inverse(&a_inv, &form, tol)?;
    let denom = result.denominator();
    rec.rows
        .push(Row::full("denominator", &[denom.re, denom.im]));
    rec.rows.push(Row::single(
        "regular",
        2,
        0,
        if result.is_regular() { 1.0 } else { 0.0 },
    ));
    match &result {
        PerturbedInverse::Regular { .. } => {
            let b_inv = result
                .inverse(&a_inv)
                .expect("regular branch has an inverse");
            let id = DenseOperator::identity(b.dim())?;
            rec.rows.push(Row::single(
                "inverse_residual",
                2,
                0,
                b.compose(&b_inv)?.sub(&id)?.max_norm(),
            ));
            let w = Vector::new(vec![Complex64::new(1.0, 0.0); b.dim()])?;
            let v = solve_perturbed(&a_inv, &form, &w, tol)?;
            let residual = b.apply(&v)?.sub(&w)?.norm() / w.norm();
            rec.rows.push(Row::single("solve_residual", 2, 0, residual));
        }
        PerturbedInverse::Singular { null_vector, .. } => {
            let scale = singular_values(&b)[0].max(a.frobenius_norm() * f64::EPSILON);
            let residual = b.apply(null_vector)?.norm() / (scale * null_vector.norm());
            rec.rows.push(Row::single("null_residual", 2, 0, residual));
            let cert = null_space_certificate(&a_inv, &form, null_vector, 1e-9)?;
            rec.rows.push(Row::single(
                "certificate",
                2,
                0,
                if cert { 1.0 } else { 0.0 },
            ));
        }
    }
    Ok(rec)
}

pub fn recover(n: usize) -> Result<OutputRecord> {
    let pair = build_pair(n)?;
    let d = inverse_difference(&pair)?;
    let probe = choose_probe(&d, 0.0)?;
    let form = recover_factors(&d, &probe)?;
    let reconstruction = form.materialize().sub(&d)?.max_norm() / d.max_norm();

    // Fix the gauge so that f matches x at the last node.
    let nodes = pair.grid.nodes();
    let h = pair.grid.h();
    let alpha = Complex64::new(nodes[n - 1], 0.0) / form.f.get(n - 1);
    let gauged: RankOneForm = form.regauge(alpha)?;

    let mut rec = OutputRecord::new("recover", &["x", "f", "l_density", "value"]).param("n", n);
    let mut f_dev: f64 = 0.0;
    let mut l_dev: f64 = 0.0;
    for (i, &x) in nodes.iter().enumerate() {
        let f = gauged.f.get(i).re;
        let l = gauged.l.get(i).re / h;
        f_dev = f_dev.max((f - x).abs());
        l_dev = l_dev.max((l - x).abs());
        rec.rows.push(Row::new(
            i.to_string(),
            vec![Some(x), Some(f), Some(l), None],
        ));
    }
    rec.rows
        .push(Row::single("reconstruction_residual", 4, 3, reconstruction));
    rec.rows.push(Row::single("f_shape_deviation", 4, 3, f_dev));
    rec.rows.push(Row::single("l_shape_deviation", 4, 3, l_dev));
    rec.rows.push(Row::single("h", 4, 3, h));
    Ok(rec)
}

/// The record plus whether every check passed.
pub fn verify() -> (OutputRecord, bool) {
    let mut rec = OutputRecord::new("verify", &["measured", "threshold", "passed"]);
    let mut all = true;
    for check in run_all() {
        all &= check.passed;
        rec.rows.push(Row::new(
            check.name,
            vec![
                check.measured.is_finite().then_some(check.measured),
                check.threshold.is_finite().then_some(check.threshold),
                Some(if check.passed { 1.0 } else { 0.0 }),
            ],
        ));
    }
    (rec, all)
}
