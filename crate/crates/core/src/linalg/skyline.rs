//! Envelope (skyline) LU without pivoting, after reverse Cuthill–McKee
//! reordering. Requires a structurally symmetric pattern.

use std::collections::VecDeque;

use super::{CsrMatrix, LinearSolveError};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SkylineLu<T> {
    /// `perm[new] = old`
    perm: Vec<usize>,
    /// first column (= first row) of the envelope of each permuted index
    first: Vec<usize>,
    /// strictly lower part of row i, columns first[i]..i
    lower: Vec<Vec<T>>,
    /// strictly upper part of column i, rows first[i]..i
    upper: Vec<Vec<T>>,
    diag: Vec<T>,
}

impl<T: Scalar> SkylineLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self, LinearSolveError> {
        if !a.has_symmetric_pattern() {
            return Err(LinearSolveError::UnsymmetricPattern);
        }
        let n = a.dim();
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in perm.iter().enumerate() {
            for &j in a.row(old).0 {
                first[new] = first[new].min(inv[j]);
            }
        }
        let mut lower: Vec<Vec<T>> = (0..n).map(|i| vec![T::zero(); i - first[i]]).collect();
        let mut upper: Vec<Vec<T>> = (0..n).map(|i| vec![T::zero(); i - first[i]]).collect();
        let mut diag = vec![T::zero(); n];
        for (new, &old) in perm.iter().enumerate() {
            let (cols, vals) = a.row(old);
            for (&j, &v) in cols.iter().zip(vals) {
                let col = inv[j];
                if col < new {
                    lower[new][col - first[new]] = v;
                } else if col > new {
                    upper[col][new - first[col]] = v;
                } else {
                    diag[new] = v;
                }
            }
        }

        let scale = a
            .values()
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()));
        let threshold = scale * T::epsilon() * T::lit(1e-4);
        for i in 0..n {
            let fi = first[i];
            // row i of L and column i of U, left to right
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let mut lij = lower[i][j - fi];
                let mut uji = upper[i][j - fi];
                for k in k0..j {
                    lij -= lower[i][k - fi] * upper[j][k - fj];
                    uji -= lower[j][k - fj] * upper[i][k - fi];
                }
                lower[i][j - fi] = lij / diag[j];
                upper[i][j - fi] = uji;
            }
            let mut d = diag[i];
            for k in fi..i {
                d -= lower[i][k - fi] * upper[i][k - fi];
            }
            if d.abs() <= threshold || !d.is_finite() {
                return Err(LinearSolveError::ZeroPivot { row: perm[i] });
            }
            diag[i] = d;
        }
        Ok(Self {
            perm,
            first,
            lower,
            upper,
            diag,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored off-diagonal envelope entries.
    pub fn envelope_size(&self) -> usize {
        self.lower.iter().map(Vec::len).sum::<usize>() * 2
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut y: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let mut acc = y[i];
            for (k, &l) in self.lower[i].iter().enumerate() {
                acc -= l * y[fi + k];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            y[i] /= self.diag[i];
            let xi = y[i];
            let fi = self.first[i];
            for (k, &u) in self.upper[i].iter().enumerate() {
                y[fi + k] -= u * xi;
            }
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

/// Reverse Cuthill–McKee ordering of the matrix graph, `perm[new] = old`.
pub fn reverse_cuthill_mckee<T: Scalar>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.dim();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    let mut level = vec![usize::MAX; n];
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(a, seed, &degree, &mut level);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a
                .row(v)
                .0
                .iter()
                .copied()
                .filter(|&w| !visited[w])
                .collect();
            nbrs.sort_by_key(|&w| (degree[w], w));
            for w in nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Last vertex of a BFS from `seed`, repeated a few times to approach the
/// graph's diameter.
fn pseudo_peripheral<T: Scalar>(
    a: &CsrMatrix<T>,
    seed: usize,
    degree: &[usize],
    level: &mut [usize],
) -> usize {
    let mut start = seed;
    let mut best_depth = 0;
    let mut touched = Vec::new();
    for _ in 0..4 {
        level[start] = 0;
        touched.push(start);
        let mut queue = VecDeque::from([start]);
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            last = v;
            for &w in a.row(v).0 {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        let depth = level[last];
        // among the deepest level prefer the smallest degree
        let candidate = touched
            .iter()
            .copied()
            .filter(|&v| level[v] == depth)
            .min_by_key(|&v| (degree[v], v))
            .unwrap_or(last);
        for &v in &touched {
            level[v] = usize::MAX;
        }
        touched.clear();
        if depth <= best_depth {
            break;
        }
        best_depth = depth;
        start = candidate;
    }
    start
}
