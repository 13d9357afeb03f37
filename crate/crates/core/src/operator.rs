//! Finite-dimensional value types: vectors, functionals, dense operators and
//! rank-one forms `|f><l|`, together with the pairing, outer product,
//! inversion and numerical-rank primitives everything else builds on.
//!
//! All scalars are complex; real data is embedded with zero imaginary part.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lu::Lu;

fn check_finite<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> Result<()> {
    match values.into_iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(DVector<Complex64>);

impl Vector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&entries)?;
        Ok(Vector(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The `index`-th coordinate basis vector (0-based).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = Self::zeros(dim)?;
        v.0[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn inner(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.0[i]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, factor: Complex64) -> Vector {
        Vector(&self.0 * factor)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Vector(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Vector(&self.0 - &other.0))
    }

    /// The functional with the same coordinates (plain transpose, no
    /// conjugation).
    pub fn transpose(&self) -> Functional {
        Functional(self.0.clone())
    }
}

/// A linear functional stored as a coordinate row: `<l|u> = Σ lᵢ uᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional(DVector<Complex64>);

impl Functional {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&weights)?;
        Ok(Functional(DVector::from_vec(weights)))
    }

    pub fn from_real(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        Ok(Vector::basis(dim, index)?.transpose())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.0[i]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, factor: Complex64) -> Functional {
        Functional(&self.0 * factor)
    }

    pub fn add(&self, other: &Functional) -> Result<Functional> {
        check_dims(self.dim(), other.dim())?;
        Ok(Functional(&self.0 + &other.0))
    }

    /// `<l|u>`.
    pub fn apply(&self, u: &Vector) -> Result<Complex64> {
        pair(self, u)
    }

    /// The functional `u ↦ <l|M u>`, i.e. the row `l·M`.
    pub fn compose(&self, m: &DenseOperator) -> Result<Functional> {
        check_dims(m.dim(), self.dim())?;
        Ok(Functional(m.0.tr_mul(&self.0)))
    }

    pub fn transpose(&self) -> Vector {
        Vector(self.0.clone())
    }
}

/// A square dense matrix acting on [`Vector`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator(DMatrix<Complex64>);

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyDimension);
        }
        check_finite(matrix.iter())?;
        Ok(DenseOperator(matrix))
    }

    /// Builds an operator from complex rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn apply(&self, u: &Vector) -> Result<Vector> {
        check_dims(self.dim(), u.dim())?;
        Ok(Vector(&self.0 * &u.0))
    }

    /// `self · other`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        check_dims(self.dim(), other.dim())?;
        Ok(DenseOperator(&self.0 * &other.0))
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        check_dims(self.dim(), other.dim())?;
        Ok(DenseOperator(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        check_dims(self.dim(), other.dim())?;
        Ok(DenseOperator(&self.0 - &other.0))
    }

    pub fn scale(&self, factor: Complex64) -> DenseOperator {
        DenseOperator(&self.0 * factor)
    }

    /// `shift·I + factor·self`.
    pub fn affine(&self, shift: Complex64, factor: Complex64) -> DenseOperator {
        let mut m = &self.0 * factor;
        for i in 0..self.dim() {
            m[(i, i)] += shift;
        }
        DenseOperator(m)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum; bounds the spectral norm of a symmetric
    /// matrix from above.
    pub fn row_sum_norm(&self) -> f64 {
        self.0
            .row_iter()
            .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|v| v.im == 0.0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.0 == self.0.transpose()
    }
}

/// `|f><l|` kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneForm {
    pub f: Vector,
    pub l: Functional,
}

impl RankOneForm {
    pub fn new(f: Vector, l: Functional) -> Result<Self> {
        check_dims(f.dim(), l.dim())?;
        Ok(RankOneForm { f, l })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn materialize(&self) -> DenseOperator {
        DenseOperator(&self.f.0 * self.l.0.transpose())
    }

    /// `f·<l|u>`.
    pub fn apply(&self, u: &Vector) -> Result<Vector> {
        Ok(self.f.scale(pair(&self.l, u)?))
    }

    /// The same operator with factors `(αf, l/α)`.
    pub fn regauge(&self, alpha: Complex64) -> Result<Self> {
        if alpha == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidArgument(
                "gauge factor must be nonzero".into(),
            ));
        }
        Self::new(self.f.scale(alpha), self.l.scale(alpha.inv()))
    }
}

/// `<l|f> = Σᵢ lᵢ fᵢ`.
pub fn pair(l: &Functional, f: &Vector) -> Result<Complex64> {
    check_dims(l.dim(), f.dim())?;
    Ok(l.0.iter().zip(f.0.iter()).map(|(a, b)| a * b).sum())
}

/// The matrix of `|f><l|`: entry `(i, j) = fᵢ·lⱼ`.
pub fn outer(f: &Vector, l: &Functional) -> Result<DenseOperator> {
    Ok(RankOneForm::new(f.clone(), l.clone())?.materialize())
}

/// Inverse by partial-pivot LU. Real operators are factored in real
/// arithmetic.
pub fn invert(a: &DenseOperator) -> Result<DenseOperator> {
    let n = a.dim();
    let inverse = if a.is_real() {
        let data: Vec<f64> = row_major(&a.0).map(|v| v.re).collect();
        let inv = Lu::factor(n, data)?.inverse();
        DMatrix::from_row_iterator(n, n, inv.into_iter().map(|v| Complex64::new(v, 0.0)))
    } else {
        let data: Vec<Complex64> = row_major(&a.0).collect();
        let inv = Lu::factor(n, data)?.inverse();
        DMatrix::from_row_iterator(n, n, inv)
    };
    DenseOperator::new(inverse)
}

/// Solves `A x = b` by partial-pivot LU without forming the inverse.
pub fn solve(a: &DenseOperator, b: &Vector) -> Result<Vector> {
    check_dims(a.dim(), b.dim())?;
    let data: Vec<Complex64> = row_major(&a.0).collect();
    let x = Lu::factor(a.dim(), data)?.solve(b.entries());
    Vector::new(x)
}

fn row_major(m: &DMatrix<Complex64>) -> impl Iterator<Item = Complex64> + '_ {
    let n = m.ncols();
    (0..m.nrows()).flat_map(move |i| (0..n).map(move |j| m[(i, j)]))
}

/// Singular values in descending order (full SVD; real path for real input).
pub fn singular_values(m: &DenseOperator) -> Vec<f64> {
    let mut values: Vec<f64> = if m.is_real() {
        m.0.map(|v| v.re)
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    } else {
        m.0.clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Number of singular values above `tol·σ_max`; zero for the zero matrix.
pub fn rank_estimate(m: &DenseOperator, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let sv = singular_values(m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * sigma_max).count())
}
