use super::DofSpace;
use crate::geometry::Vec2;
use crate::mesh::PolytopalMesh;
use crate::scalar::Scalar;

/// Per-cell HMM operators. Local dof order is `[cell, faces in F_K order]`.
#[derive(Clone, Debug)]
pub struct LocalCell<T> {
    pub cell: usize,
    /// Global dof ids in local order.
    pub dofs: Vec<usize>,
    pub area: T,
    pub barycenter: Vec2<T>,
    pub face_measures: Vec<T>,
    pub face_midpoints: Vec<Vec2<T>>,
    /// Outward unit normals `n_{K,σ}`.
    pub normals: Vec<Vec2<T>>,
    /// `d_{K,σ}`, distance from `x_K` to the face line.
    pub distances: Vec<T>,
    /// `|D_{K,σ}| = |σ| d_{K,σ} / 2`.
    pub diamond_measures: Vec<T>,
    /// `|σ| n_{K,σ} / |K|`: coefficients of the consistent gradient on the
    /// face unknowns.
    pub consistent: Vec<Vec2<T>>,
    /// `grads[j][a]`: contribution of local dof `a` to `∇_D` on half-diamond `j`.
    pub grads: Vec<Vec<Vec2<T>>>,
}

impl<T: Scalar> LocalCell<T> {
    pub(super) fn new(mesh: &PolytopalMesh<T>, space: &DofSpace, k: usize, weight: T) -> Self {
        let cell = &mesh.cells[k];
        let m = cell.face_ids.len();
        let mut dofs = Vec::with_capacity(m + 1);
        dofs.push(space.cell_dof(k));
        dofs.extend(cell.face_ids.iter().map(|&f| space.face_dof(f)));

        let face_measures: Vec<T> = cell.face_ids.iter().map(|&f| mesh.faces[f].measure).collect();
        let face_midpoints: Vec<Vec2<T>> =
            cell.face_ids.iter().map(|&f| mesh.faces[f].midpoint).collect();
        let normals: Vec<Vec2<T>> = (0..m).map(|i| mesh.outward_normal(k, i)).collect();
        let distances: Vec<T> = (0..m).map(|i| mesh.face_distance(k, i)).collect();
        let half = T::lit(0.5);
        let diamond_measures: Vec<T> = face_measures
            .iter()
            .zip(&distances)
            .map(|(&s, &d)| s * d * half)
            .collect();
        let consistent: Vec<Vec2<T>> = face_measures
            .iter()
            .zip(&normals)
            .map(|(&s, &n)| n * (s / cell.area))
            .collect();

        // ∇_{K,σ_j} u = G(u) + (w√2 / d_j) (u_j − u_K − G(u)·(x̄_j − x_K)) n_j
        let sqrt_dim = T::lit(2.0).sqrt();
        let grads = (0..m)
            .map(|j| {
                let beta = weight * sqrt_dim / distances[j];
                let offset = face_midpoints[j] - cell.barycenter;
                let nj = normals[j];
                let mut row = Vec::with_capacity(m + 1);
                row.push(nj * (-beta));
                for (i, &g) in consistent.iter().enumerate() {
                    let mut coef = g - nj * (beta * g.dot(offset));
                    if i == j {
                        coef += nj * beta;
                    }
                    row.push(coef);
                }
                row
            })
            .collect();

        Self {
            cell: k,
            dofs,
            area: cell.area,
            barycenter: cell.barycenter,
            face_measures,
            face_midpoints,
            normals,
            distances,
            diamond_measures,
            consistent,
            grads,
        }
    }

    pub fn n_faces(&self) -> usize {
        self.face_measures.len()
    }

    /// Consistent gradient from local values `[u_K, u_σ...]`.
    pub fn consistent_gradient(&self, local: &[T]) -> Vec2<T> {
        self.consistent
            .iter()
            .zip(&local[1..])
            .map(|(&g, &u)| g * u)
            .sum()
    }

    /// `∇_D` on half-diamond `j` from local values.
    pub fn half_diamond_gradient(&self, local: &[T], j: usize) -> Vec2<T> {
        self.grads[j]
            .iter()
            .zip(local)
            .map(|(&g, &u)| g * u)
            .sum()
    }

    /// `∫_K |∇_D u|²`.
    pub fn energy(&self, local: &[T]) -> T {
        (0..self.n_faces())
            .map(|j| self.diamond_measures[j] * self.half_diamond_gradient(local, j).norm_squared())
            .sum()
    }

    pub fn diffusion_matrix(&self) -> LocalDiffusionMatrix<T> {
        let n = self.dofs.len();
        let mut data = vec![T::zero(); n * n];
        for (j, row) in self.grads.iter().enumerate() {
            let w = self.diamond_measures[j];
            for a in 0..n {
                for b in a..n {
                    data[a * n + b] += w * row[a].dot(row[b]);
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                data[a * n + b] = data[b * n + a];
            }
        }
        LocalDiffusionMatrix {
            cell: self.cell,
            size: n,
            data,
        }
    }
}

/// Dense symmetric `(1 + #F_K)²` matrix with
/// `(A_K u)·v = Σ_σ |D_{K,σ}| ∇_{K,σ}u · ∇_{K,σ}v`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDiffusionMatrix<T> {
    pub cell: usize,
    pub size: usize,
    /// Row-major entries.
    pub data: Vec<T>,
}

impl<T: Scalar> LocalDiffusionMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.size + j]
    }

    pub fn apply(&self, u: &[T]) -> Vec<T> {
        (0..self.size)
            .map(|i| {
                self.data[i * self.size..(i + 1) * self.size]
                    .iter()
                    .zip(u)
                    .map(|(&a, &x)| a * x)
                    .sum()
            })
            .collect()
    }

    pub fn quadratic_form(&self, u: &[T], v: &[T]) -> T {
        self.apply(u).iter().zip(v).map(|(&a, &b)| a * b).sum()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.size {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}
