use super::{CsrMatrix, LinearSolveError};
use crate::scalar::Scalar;

/// Incomplete LU factorisation with the sparsity pattern of the matrix.
#[derive(Clone, Debug)]
pub struct Ilu0<T> {
    lu: CsrMatrix<T>,
    diag: Vec<usize>,
}

impl<T: Scalar> Ilu0<T> {
    pub fn new(a: &CsrMatrix<T>) -> Result<Self, LinearSolveError> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            diag.push(
                lu.position(i, i)
                    .ok_or(LinearSolveError::ZeroPivot { row: i })?,
            );
        }
        let row_ptr = lu.row_ptr().to_vec();
        let col_idx = lu.col_idx().to_vec();
        // column -> position map for the current row
        let mut marker = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (row_ptr[i], row_ptr[i + 1]);
            for p in start..end {
                marker[col_idx[p]] = p;
            }
            let vals = lu.values_mut();
            for p in start..end {
                let k = col_idx[p];
                if k >= i {
                    break;
                }
                let pivot = vals[diag[k]];
                if pivot == T::zero() || !pivot.is_finite() {
                    return Err(LinearSolveError::ZeroPivot { row: k });
                }
                let factor = vals[p] / pivot;
                vals[p] = factor;
                for q in diag[k] + 1..row_ptr[k + 1] {
                    let m = marker[col_idx[q]];
                    if m != usize::MAX {
                        vals[m] -= factor * vals[q];
                    }
                }
            }
            for p in start..end {
                marker[col_idx[p]] = usize::MAX;
            }
            let d = lu.values()[diag[i]];
            if d == T::zero() || !d.is_finite() {
                return Err(LinearSolveError::ZeroPivot { row: i });
            }
        }
        Ok(Self { lu, diag })
    }

    /// Solves `L U z = r` in place.
    pub fn apply_in_place(&self, z: &mut [T]) {
        let n = self.lu.dim();
        let rp = self.lu.row_ptr();
        let ci = self.lu.col_idx();
        let v = self.lu.values();
        for i in 0..n {
            let (lo, d) = (rp[i], self.diag[i]);
            let s: T = ci[lo..d].iter().zip(&v[lo..d]).map(|(&j, &a)| a * z[j]).sum();
            z[i] -= s;
        }
        for i in (0..n).rev() {
            let (d, hi) = (self.diag[i], rp[i + 1]);
            let s: T = ci[d + 1..hi].iter().zip(&v[d + 1..hi]).map(|(&j, &a)| a * z[j]).sum();
            z[i] = (z[i] - s) / v[d];
        }
    }
}
