//! Partial-pivot LU factorization on row-major storage.
//!
//! Generic over `f64` and `Complex64` so that real operators (the discrete
//! Laplacians, real shifts) take the cheaper real path.

use nalgebra::ComplexField;

use crate::error::{Error, Result};

/// A pivot is rejected when its modulus falls below this fraction of the
/// largest entry of the input matrix.
pub const PIVOT_RELATIVE_TOLERANCE: f64 = 1e-13;

pub(crate) struct Lu<T> {
    n: usize,
    /// Unit-lower `L` below the diagonal, `U` on and above it.
    data: Vec<T>,
    /// `perm[i]` is the original row now stored in row `i`.
    perm: Vec<usize>,
}

impl<T> Lu<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    pub(crate) fn factor(n: usize, mut data: Vec<T>) -> Result<Self> {
        debug_assert_eq!(data.len(), n * n);
        let scale = data.iter().map(|v| v.modulus()).fold(0.0_f64, f64::max);
        let threshold = PIVOT_RELATIVE_TOLERANCE * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        if scale == 0.0 {
            return Err(Error::SingularMatrix {
                pivot: 0.0,
                step: 0,
            });
        }

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mod = data[k * n + k].modulus();
            for i in k + 1..n {
                let m = data[i * n + k].modulus();
                if m > pivot_mod {
                    pivot_mod = m;
                    pivot_row = i;
                }
            }
            if pivot_mod < threshold || pivot_mod == 0.0 {
                return Err(Error::SingularMatrix {
                    pivot: pivot_mod,
                    step: k,
                });
            }
            if pivot_row != k {
                swap_rows(&mut data, n, k, pivot_row);
                perm.swap(k, pivot_row);
            }

            let (head, tail) = data.split_at_mut((k + 1) * n);
            let row_k = &head[k * n..];
            let pivot = row_k[k];
            for row_i in tail.chunks_exact_mut(n) {
                let entry = row_i[k];
                if entry.is_zero() {
                    continue;
                }
                let m = entry / pivot;
                row_i[k] = m;
                for (dst, &src) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                    *dst -= m * src;
                }
            }
        }
        Ok(Lu { n, data, perm })
    }

    pub(crate) fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = &self.data[i * n..i * n + i];
            let mut acc = x[i];
            for (l, xj) in row.iter().zip(&x[..i]) {
                acc -= *l * *xj;
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = x[i];
            for (u, xj) in row[i + 1..].iter().zip(&x[i + 1..]) {
                acc -= *u * *xj;
            }
            x[i] = acc / row[i];
        }
        x
    }

    /// Row-major inverse, computed by applying the factors to `P·I` one row
    /// operation at a time. Zero multipliers are skipped, so banded inputs
    /// stay cheap.
    pub(crate) fn inverse(&self) -> Vec<T> {
        let n = self.n;
        let mut x = vec![T::zero(); n * n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[i * n + p] = T::one();
        }
        // Forward: L·Y = P.
        for k in 0..n {
            let (head, tail) = x.split_at_mut((k + 1) * n);
            let row_k = &head[k * n..];
            for (offset, row_i) in tail.chunks_exact_mut(n).enumerate() {
                let l = self.data[(k + 1 + offset) * n + k];
                if l.is_zero() {
                    continue;
                }
                for (dst, &src) in row_i.iter_mut().zip(row_k) {
                    *dst -= l * src;
                }
            }
        }
        // Backward: U·X = Y.
        for k in (0..n).rev() {
            let inv_pivot = T::one() / self.data[k * n + k];
            let (head, tail) = x.split_at_mut(k * n);
            let row_k = &mut tail[..n];
            for v in row_k.iter_mut() {
                *v *= inv_pivot;
            }
            for (i, row_i) in head.chunks_exact_mut(n).enumerate() {
                let u = self.data[i * n + k];
                if u.is_zero() {
                    continue;
                }
                for (dst, &src) in row_i.iter_mut().zip(row_k.iter()) {
                    *dst -= u * src;
                }
            }
        }
        x
    }
}

fn swap_rows<T>(data: &mut [T], n: usize, a: usize, b: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (head, tail) = data.split_at_mut(hi * n);
    head[lo * n..(lo + 1) * n].swap_with_slice(&mut tail[..n]);
}
