use crate::scalar::Scalar;

/// Square sparse matrix in compressed sparse row form, columns sorted per row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds an `n×n` matrix, summing duplicate entries. Explicit zeros are
    /// kept in the pattern.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(i, j, _) in triplets {
            assert!(i < n && j < n, "triplet ({i}, {j}) outside {n}x{n}");
            counts[i + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![T::zero(); triplets.len()];
        for &(i, j, v) in triplets {
            cols[cursor[i]] = j;
            vals[cursor[i]] = v;
            cursor[i] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, T)> = Vec::new();
        for i in 0..n {
            scratch.clear();
            scratch.extend((counts[i]..counts[i + 1]).map(|p| (cols[p], vals[p])));
            scratch.sort_by_key(|&(c, _)| c);
            for &(c, v) in &scratch {
                if col_idx.len() > row_ptr[i] && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Pattern from per-row column lists; all values zero.
    pub fn from_pattern(n: usize, mut rows: Vec<Vec<usize>>) -> Self {
        assert_eq!(rows.len(), n);
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable();
            row.dedup();
            col_idx.extend_from_slice(row);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self {
            n,
            row_ptr,
            col_idx,
            values: vec![T::zero(); nnz],
        }
    }

    pub fn identity(n: usize) -> Self {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, T::one())).collect();
        Self::from_triplets(n, &triplets)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Storage position of entry `(i, j)` if it is in the pattern.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.col_idx[start..self.row_ptr[i + 1]]
            .binary_search(&j)
            .ok()
            .map(|p| start + p)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.position(i, j).map_or(T::zero(), |p| self.values[p])
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        for (yi, w) in y.iter_mut().zip(self.row_ptr.windows(2)) {
            let cols = &self.col_idx[w[0]..w[1]];
            let vals = &self.values[w[0]..w[1]];
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    /// `true` when `(i, j)` in the pattern implies `(j, i)` is too.
    pub fn has_symmetric_pattern(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i)
                .0
                .iter()
                .all(|&j| self.position(j, i).is_some())
        })
    }

    /// Dense row-major copy; for tests and small diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        d
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `‖b − A x‖₂`.
pub fn residual_norm<T: Scalar>(a: &CsrMatrix<T>, x: &[T], b: &[T]) -> T {
    let ax = a.mul_vec(x);
    ax.iter()
        .zip(b)
        .map(|(&p, &q)| (q - p) * (q - p))
        .sum::<T>()
        .sqrt()
}
