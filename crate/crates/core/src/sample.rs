//! Seeded random instances for the invariant suite and the CLI.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::operator::{invert, pair, DenseOperator, Functional, RankOneForm, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Result<Vector> {
    Vector::new((0..dim).map(|_| unit_complex(rng)).collect())
}

pub fn random_functional(rng: &mut impl Rng, dim: usize) -> Result<Functional> {
    Functional::new((0..dim).map(|_| unit_complex(rng)).collect())
}

/// Complex entries in the unit square plus `dim` on the diagonal, which keeps
/// the condition number small.
pub fn random_operator(rng: &mut impl Rng, dim: usize) -> Result<DenseOperator> {
    let mut entries: Vec<Complex64> = (0..dim * dim).map(|_| unit_complex(rng)).collect();
    for i in 0..dim {
        entries[i * dim + i] += dim as f64;
    }
    DenseOperator::from_fn(dim, |i, j| entries[i * dim + j])
}

/// A perturbation problem `(A, A⁻¹, f<l|)`.
#[derive(Debug, Clone)]
pub struct PerturbationInstance {
    pub a: DenseOperator,
    pub a_inv: DenseOperator,
    pub form: RankOneForm,
}

impl PerturbationInstance {
    /// `B = A − f<l|`.
    pub fn perturbed(&self) -> Result<DenseOperator> {
        self.a.sub(&self.form.materialize())
    }
}

/// Random instance with `|1 − <l|A⁻¹f>| > min_denominator`. The perturbation
/// is scaled up to the size of `A` so the correction is not negligible.
pub fn regular_instance(
    rng: &mut impl Rng,
    dim: usize,
    min_denominator: f64,
) -> Result<PerturbationInstance> {
    loop {
        let a = random_operator(rng, dim)?;
        let a_inv = invert(&a)?;
        let f = random_vector(rng, dim)?.scale(Complex64::new(dim as f64, 0.0));
        let l = random_functional(rng, dim)?;
        let form = RankOneForm::new(f, l)?;
        let g = a_inv.apply(&form.f)?;
        let denominator = Complex64::new(1.0, 0.0) - pair(&form.l, &g)?;
        if denominator.norm() > min_denominator {
            return Ok(PerturbationInstance { a, a_inv, form });
        }
    }
}

/// Random instance with `l` rescaled so that `<l|A⁻¹f> = 1`, making
/// `B = A − f<l|` singular.
pub fn singular_instance(rng: &mut impl Rng, dim: usize) -> Result<PerturbationInstance> {
    let a = random_operator(rng, dim)?;
    let a_inv = invert(&a)?;
    let f = random_vector(rng, dim)?;
    let l = random_functional(rng, dim)?;
    let g = a_inv.apply(&f)?;
    let l = l.scale(pair(&l, &g)?.inv());
    let form = RankOneForm::new(f, l)?;
    Ok(PerturbationInstance { a, a_inv, form })
}
