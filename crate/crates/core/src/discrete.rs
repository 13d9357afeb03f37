//! Finite-difference embodiment of `T_DD` and `T_DN` on a uniform grid.
//!
//! Interior nodes `x_i = i·h`, `i = 1..n`, `h = 1/(n+1)`. `T_DD` is the
//! standard three-point stencil; `T_DN` mirrors the last node
//! (`u_{n+1} = u_n`), which changes only the last diagonal entry and keeps
//! `T_DD − T_DN = h⁻²·e_n e_nᵀ` exactly. Inverse entries approximate
//! `h·G(x_i, x_j)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krein::{deflect_with, krein_denominator_with};
use crate::lu::PIVOT_RELATIVE_TOLERANCE;
use crate::operator::{invert, DenseOperator, Functional, RankOneForm, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridTooSmall(n));
        }
        let h = 1.0 / (n as f64 + 1.0);
        let nodes = (1..=n).map(|i| i as f64 * h).collect();
        Ok(Grid { n, h, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePair {
    pub grid: Grid,
    pub t_dd: DenseOperator,
    pub t_dn: DenseOperator,
    /// Samples of `f(x) = x`.
    pub f_vec: Vector,
    /// Quadrature of `l(u) = ∫ ξ u dξ`: weight `h·x_i`.
    pub l_fun: Functional,
}

pub fn build_pair(n: usize) -> Result<DiscretePair> {
    let grid = Grid::new(n)?;
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let stencil = |i: usize, j: usize| -> Complex64 {
        let v = if i == j {
            2.0 * inv_h2
        } else if i.abs_diff(j) == 1 {
            -inv_h2
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    };
    let t_dd = DenseOperator::from_fn(n, stencil)?;
    let mut dn = t_dd.matrix().clone();
    dn[(n - 1, n - 1)] = Complex64::new(inv_h2, 0.0);
    let t_dn = DenseOperator::new(dn)?;
    let f_vec = Vector::from_real(grid.nodes())?;
    let weights: Vec<f64> = grid.nodes().iter().map(|&x| grid.h * x).collect();
    let l_fun = Functional::from_real(&weights)?;
    Ok(DiscretePair {
        grid,
        t_dd,
        t_dn,
        f_vec,
        l_fun,
    })
}

impl DiscretePair {
    /// `(f_vec, l_fun)` as a rank-one form.
    pub fn rank_one_form(&self) -> Result<RankOneForm> {
        RankOneForm::new(self.f_vec.clone(), self.l_fun.clone())
    }

    /// `(h⁻²·e_n, e_n)`, with `T_DN = T_DD − |h⁻² e_n><e_n|`.
    pub fn boundary_form(&self) -> Result<RankOneForm> {
        let n = self.grid.n;
        let inv_h2 = 1.0 / (self.grid.h * self.grid.h);
        RankOneForm::new(
            Vector::basis(n, n - 1)?.scale(Complex64::new(inv_h2, 0.0)),
            Functional::basis(n, n - 1)?,
        )
    }

    fn dd_bands(&self) -> Tridiagonal {
        Tridiagonal::from_dense(&self.t_dd)
    }

    /// `(z − T_DD)⁻¹ v` by banded elimination.
    pub fn apply_dd_resolvent(&self, z: Complex64, v: &Vector) -> Result<Vector> {
        self.dd_bands().shifted_solve(z, v)
    }

    /// The Krein denominator `1 + z<l|(−I + z R_DD) f>` for the discrete pair,
    /// without forming any dense resolvent.
    pub fn denominator(&self, z: Complex64) -> Result<Complex64> {
        let bands = self.dd_bands();
        krein_denominator_with(|v| bands.shifted_solve(z, v), z, &self.rank_one_form()?)
    }

    /// `(−I + z R_DD) f`, the DN eigenvector at a denominator root.
    pub fn deflected_f(&self, z: Complex64) -> Result<Vector> {
        let bands = self.dd_bands();
        deflect_with(|v| bands.shifted_solve(z, v), z, &self.f_vec)
    }

    /// Closed-form eigenvalues of the DD matrix,
    /// `(4/h²)·sin²(mπh/2)`, ascending.
    pub fn dd_eigenvalues(&self) -> Vec<f64> {
        let h = self.grid.h;
        (1..=self.grid.n)
            .map(|m| {
                let s = (m as f64 * std::f64::consts::PI * h / 2.0).sin();
                4.0 / (h * h) * s * s
            })
            .collect()
    }
}

/// `T_DN⁻¹ − T_DD⁻¹` by dense inversion of both matrices.
pub fn inverse_difference(pair: &DiscretePair) -> Result<DenseOperator> {
    invert(&pair.t_dn)?.sub(&invert(&pair.t_dd)?)
}

/// `(z − T)⁻¹` by dense inversion.
pub fn resolvent(t: &DenseOperator, z: Complex64) -> Result<DenseOperator> {
    match invert(&t.affine(z, Complex64::new(-1.0, 0.0))) {
        Err(Error::SingularMatrix { .. }) => Err(Error::SpectrumHit(z)),
        other => other,
    }
}

/// The `count` smallest eigenvalues of `T_DN` from a dense symmetric
/// eigensolve, ascending.
pub fn discrete_new_eigenvalues(pair: &DiscretePair, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > pair.grid.n {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue count {count} must lie in 1..={}",
            pair.grid.n
        )));
    }
    let real: DMatrix<f64> = pair.t_dn.matrix().map(|v| v.re);
    let mut values: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    Ok(values)
}

/// A real tridiagonal matrix, solved against complex shifts with partial
/// pivoting (the LAPACK `gttrf`/`gttrs` scheme).
#[derive(Debug, Clone)]
struct Tridiagonal {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Tridiagonal {
    fn from_dense(m: &DenseOperator) -> Self {
        let n = m.dim();
        Tridiagonal {
            lower: (1..n).map(|i| m.entry(i, i - 1).re).collect(),
            diag: (0..n).map(|i| m.entry(i, i).re).collect(),
            upper: (1..n).map(|i| m.entry(i - 1, i).re).collect(),
        }
    }

    /// Solves `(z·I − T) u = v`.
    fn shifted_solve(&self, z: Complex64, v: &Vector) -> Result<Vector> {
        let n = self.diag.len();
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut dl: Vec<Complex64> = self.lower.iter().map(|&x| c(-x)).collect();
        let mut d: Vec<Complex64> = self.diag.iter().map(|&x| z - x).collect();
        let mut du: Vec<Complex64> = self.upper.iter().map(|&x| c(-x)).collect();
        let mut du2 = vec![c(0.0); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        let scale = d
            .iter()
            .chain(&dl)
            .chain(&du)
            .map(|x| x.norm())
            .fold(0.0_f64, f64::max);
        let threshold = PIVOT_RELATIVE_TOLERANCE * scale;

        for i in 0..n - 1 {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() > 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if let Some(step) = d
            .iter()
            .position(|p| p.norm() < threshold || p.norm() == 0.0)
        {
            return Err(Error::SingularMatrix {
                pivot: d[step].norm(),
                step,
            });
        }

        let mut b = v.entries().to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                let carry = dl[i] * b[i];
                b[i + 1] -= carry;
            }
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
        Vector::new(b)
    }
}
