//! Property tests for the rank-one algebra. Brute-force inverses come from
//! nalgebra's own `try_inverse`, not from the crate's LU.

use krein_core::krein::{resolvent_difference, SpectralPoint};
use krein_core::operator::{
    invert, outer, pair, rank_estimate, DenseOperator, Functional, RankOneForm, Vector,
};
use krein_core::rank_one::{
    default_tolerance, null_space_certificate, perturbed_inverse, solve_perturbed, PerturbedInverse,
};
use krein_core::recovery::{bilinear_value, recover_factors, Probe};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn entries(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b)), len)
}

/// Diagonally dominant, hence well conditioned.
fn operator(dim: usize) -> impl Strategy<Value = DenseOperator> {
    entries(dim * dim).prop_map(move |e| {
        DenseOperator::from_fn(dim, |i, j| {
            e[i * dim + j]
                + if i == j {
                    c(dim as f64 + 1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
        })
        .unwrap()
    })
}

fn problem() -> impl Strategy<Value = (DenseOperator, Vector, Functional, Vector)> {
    (1usize..=7).prop_flat_map(|n| {
        (
            operator(n),
            entries(n).prop_map(|v| Vector::new(v).unwrap()),
            entries(n).prop_map(|v| Functional::new(v).unwrap()),
            entries(n).prop_map(|v| Vector::new(v).unwrap()),
        )
    })
}

fn oracle_inverse(m: &DenseOperator) -> DMatrix<Complex64> {
    m.matrix().clone().try_inverse().expect("oracle inverse")
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn outer_acts_as_f_times_pairing((_, f, l, u) in problem()) {
        let lhs = outer(&f, &l).unwrap().apply(&u).unwrap();
        let rhs = f.scale(pair(&l, &u).unwrap());
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-14 * (1.0 + f.norm() * l.norm() * u.norm()));
    }

    #[test]
    fn outer_has_rank_at_most_one((_, f, l, _) in problem()) {
        let rank = rank_estimate(&outer(&f, &l).unwrap(), 1e-10).unwrap();
        prop_assert!(rank <= 1);
    }

    #[test]
    fn invert_matches_oracle((a, ..) in problem()) {
        let ours = invert(&a).unwrap();
        let theirs = oracle_inverse(&a);
        prop_assert!(max_abs(&(ours.matrix() - &theirs)) <= 1e-12 * max_abs(&theirs));
    }

    #[test]
    fn regular_branch_reproduces_inverse((a, f, l, w) in problem()) {
        // Scale f so the perturbation is not negligible next to A.
        let f = f.scale(c(a.dim() as f64, 0.0));
        let a_inv = invert(&a).unwrap();
        let form = RankOneForm::new(f, l).unwrap();
        let b = a.sub(&form.materialize()).unwrap();
        let tol = default_tolerance(&a_inv, &form).unwrap();
        let result = perturbed_inverse(&a_inv, &form, tol).unwrap();
        prop_assume!(result.denominator().norm() > 1e-3);
        let inverse = result.inverse(&a_inv).unwrap();
        let oracle = oracle_inverse(&b);
        let scale = max_abs(&oracle);
        prop_assert!(max_abs(&(inverse.matrix() - &oracle)) <= 1e-9 * scale);

        let v = solve_perturbed(&a_inv, &form, &w, tol).unwrap();
        let residual = b.apply(&v).unwrap().sub(&w).unwrap();
        prop_assert!(residual.norm() <= 1e-9 * (1.0 + w.norm()));
    }

    #[test]
    fn tuned_functional_gives_null_vector((a, f, l, _) in problem()) {
        let a_inv = invert(&a).unwrap();
        let g = a_inv.apply(&f).unwrap();
        let lg = pair(&l, &g).unwrap();
        prop_assume!(lg.norm() > 1e-3 && g.norm() > 1e-6);
        let form = RankOneForm::new(f, l.scale(lg.inv())).unwrap();
        let tol = default_tolerance(&a_inv, &form).unwrap();
        let PerturbedInverse::Singular { null_vector, .. } = perturbed_inverse(&a_inv, &form, tol).unwrap() else {
            return Err(TestCaseError::fail("expected the singular branch"));
        };
        let b = a.sub(&form.materialize()).unwrap();
        let residual = b.apply(&null_vector).unwrap().norm();
        // For n = 1 the singular B is the zero matrix, so measure against the
        // inputs rather than against ‖B‖.
        let scale = a.frobenius_norm() + form.f.norm() * form.l.norm();
        prop_assert!(residual <= 1e-12 * scale * null_vector.norm());
        prop_assert!(null_space_certificate(&a_inv, &form, &null_vector, 1e-9).unwrap());
    }

    #[test]
    fn resolvent_difference_is_gauge_invariant(
        (a, f, l, _) in problem(),
        alpha in (0.2..5.0f64, -3.0..3.0f64),
        z in (-4.0..4.0f64, 0.5..4.0f64),
    ) {
        let z = c(z.0, z.1);
        let t1 = a;
        let r1 = invert(&t1.affine(z, c(-1.0, 0.0))).unwrap();
        let form = RankOneForm::new(f, l).unwrap();
        let gauged = form.regauge(c(alpha.0, alpha.1)).unwrap();
        let Ok(d1) = resolvent_difference(&r1, z, &form, 1e-8) else { return Ok(()) };
        let d2 = resolvent_difference(&r1, z, &gauged, 1e-8).unwrap();
        let m1 = d1.materialize().unwrap();
        let m2 = d2.materialize().unwrap();
        prop_assert!(m1.sub(&m2).unwrap().max_norm() <= 1e-10 * (1.0 + m1.max_norm()));
    }

    /// Brute force: build `T₂ = (T₁⁻¹ + |f><l|)⁻¹` and compare resolvents.
    #[test]
    fn krein_formula_matches_brute_force(
        (t1, f, l, _) in problem(),
        z in (-4.0..4.0f64, 0.5..4.0f64),
    ) {
        let n = t1.dim();
        let z = c(z.0, z.1);
        let form = RankOneForm::new(f.scale(c(0.1, 0.0)), l).unwrap();
        let t1_inv = oracle_inverse(&t1);
        let t2_inv = &t1_inv + form.materialize().matrix();
        prop_assume!(t2_inv.clone().lu().determinant().norm() > 1e-6 * max_abs(&t2_inv).powi(n as i32));
        let t2 = t2_inv.try_inverse().unwrap();
        let shift = |t: &DMatrix<Complex64>| (DMatrix::identity(n, n) * z - t).try_inverse();
        let (Some(r1), Some(r2)) = (shift(t1.matrix()), shift(&t2)) else { return Ok(()) };
        let brute = &r2 - &r1;

        let r1_op = DenseOperator::new(r1).unwrap();
        let Ok(diff) = resolvent_difference(&r1_op, z, &form, 1e-6) else { return Ok(()) };
        let ours = diff.materialize().unwrap();
        prop_assert!(max_abs(&(ours.matrix() - &brute)) <= 1e-7 * (1.0 + max_abs(&brute)));
    }

    #[test]
    fn branch_choice_does_not_matter(re in -50.0..50.0f64, im in -10.0..10.0f64) {
        let p = SpectralPoint::from_z(c(re, im));
        prop_assert_eq!(p.other_branch().z(), p.z());
        prop_assert!((p.k() * p.k() - p.z()).norm() <= 1e-12 * (1.0 + p.z().norm()));
    }

    #[test]
    fn every_admissible_probe_recovers_the_same_operator(
        (s, f, l, _) in problem(),
        row in 0usize..7,
        col in 0usize..7,
    ) {
        let n = f.dim();
        let d = RankOneForm::new(f.clone(), l.clone()).unwrap().materialize();
        prop_assume!(d.max_norm() > 1e-8);
        let Ok(probe) = Probe::coordinate(&d, row % n, col % n) else { return Ok(()) };
        prop_assume!(probe.pairing.norm() > 1e-6 * d.max_norm());
        let recovered = recover_factors(&d, &probe).unwrap().materialize();
        prop_assert!(recovered.sub(&d).unwrap().max_norm() <= 1e-10 * d.max_norm());
        let direct = pair(&l, &s.apply(&f).unwrap()).unwrap();
        let via_d = bilinear_value(&d, &s, &probe).unwrap();
        prop_assert!((direct - via_d).norm() <= 1e-9 * (1.0 + f.norm() * l.norm() * s.max_norm() * n as f64));
    }
}
