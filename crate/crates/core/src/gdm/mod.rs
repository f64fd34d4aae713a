//! Hybrid mimetic mixed (HMM) gradient discretisation.
//!
//! Unknowns live on cells and faces. The function reconstruction is the
//! piecewise-constant cell value; the gradient reconstruction is constant on
//! each half-diamond `D_{K,σ}` (the triangle spanned by `x_K` and `σ`) and
//! equals the consistent cell gradient plus a face-wise stabilisation.

mod dofs;
mod local;

pub use dofs::{DofSpace, DofVector};
pub use local::{LocalCell, LocalDiffusionMatrix};

use crate::geometry::Vec2;
use crate::mesh::PolytopalMesh;
use crate::scalar::Scalar;

/// The HMM gradient discretisation on a fixed mesh, with per-cell operators
/// precomputed.
#[derive(Clone, Debug)]
pub struct Hmm<'m, T> {
    mesh: &'m PolytopalMesh<T>,
    space: DofSpace,
    cells: Vec<LocalCell<T>>,
    stabilization: T,
}

impl<'m, T: Scalar> Hmm<'m, T> {
    /// Unit stabilisation weight.
    pub fn new(mesh: &'m PolytopalMesh<T>) -> Self {
        Self::with_stabilization(mesh, T::one())
    }

    /// `weight` scales the `√d / d_{K,σ}` face residual term; it must be
    /// positive for `∇_D` to define a norm.
    pub fn with_stabilization(mesh: &'m PolytopalMesh<T>, weight: T) -> Self {
        assert!(weight > T::zero(), "stabilisation weight must be positive");
        let space = DofSpace::new(mesh);
        let cells = (0..mesh.n_cells())
            .map(|k| LocalCell::new(mesh, &space, k, weight))
            .collect();
        Self {
            mesh,
            space,
            cells,
            stabilization: weight,
        }
    }

    pub fn mesh(&self) -> &'m PolytopalMesh<T> {
        self.mesh
    }

    pub fn space(&self) -> &DofSpace {
        &self.space
    }

    pub fn local(&self, cell: usize) -> &LocalCell<T> {
        &self.cells[cell]
    }

    pub fn locals(&self) -> &[LocalCell<T>] {
        &self.cells
    }

    pub fn stabilization(&self) -> T {
        self.stabilization
    }

    /// `Π_D φ` on cell `K`.
    pub fn reconstruct(&self, dofs: &DofVector<T>, cell: usize) -> T {
        dofs.cell(cell)
    }

    /// `(1/|K|) Σ_σ |σ| φ_σ n_{K,σ}`.
    pub fn consistent_cell_gradient(&self, dofs: &DofVector<T>, cell: usize) -> Vec2<T> {
        self.cells[cell].consistent_gradient(&self.gather(dofs, cell))
    }

    /// Value of `∇_D φ` on the half-diamond of `cell` and its local face `local`.
    pub fn stabilized_gradient(&self, dofs: &DofVector<T>, cell: usize, local: usize) -> Vec2<T> {
        self.cells[cell].half_diamond_gradient(&self.gather(dofs, cell), local)
    }

    /// Local diffusion (Gram) matrix of `∇_D` on `cell`, unit diffusivity.
    pub fn local_diffusion_matrix(&self, cell: usize) -> LocalDiffusionMatrix<T> {
        self.cells[cell].diffusion_matrix()
    }

    /// Fluxes `F_{K,σ}(φ)` for each local face of `cell`, defined by
    /// `Σ_σ |σ| F_{K,σ}(φ)(v_K − v_σ) = ∫_K ∇_D φ · ∇_D v`.
    pub fn fluxes(&self, dofs: &DofVector<T>, cell: usize) -> Vec<T> {
        let local = &self.cells[cell];
        let a = local.diffusion_matrix();
        let u = self.gather(dofs, cell);
        let au = a.apply(&u);
        local
            .face_measures
            .iter()
            .enumerate()
            .map(|(i, &m)| -au[i + 1] / m)
            .collect()
    }

    /// `J_D`: cell values at `x_K`, face values at face midpoints (boundary
    /// faces included).
    pub fn interpolate<F: Fn(Vec2<T>) -> T>(&self, field: F) -> DofVector<T> {
        let mut out = DofVector::zeros(&self.space);
        for (k, c) in self.mesh.cells.iter().enumerate() {
            *out.cell_mut(k) = field(c.barycenter);
        }
        for (f, face) in self.mesh.faces.iter().enumerate() {
            *out.face_mut(f) = field(face.midpoint);
        }
        out
    }

    /// Local dof values of `cell` in `[cell, faces...]` order.
    pub fn gather(&self, dofs: &DofVector<T>, cell: usize) -> Vec<T> {
        self.cells[cell].dofs.iter().map(|&i| dofs[i]).collect()
    }

    /// `‖∇_D φ‖²_{L²}`.
    pub fn gradient_norm_squared(&self, dofs: &DofVector<T>) -> T {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| c.energy(&self.gather(dofs, k)))
            .sum()
    }

    pub fn gradient_norm(&self, dofs: &DofVector<T>) -> T {
        self.gradient_norm_squared(dofs).sqrt()
    }

    /// `‖Π_D φ‖_{L²}`.
    pub fn reconstruction_norm(&self, dofs: &DofVector<T>) -> T {
        self.mesh
            .cells
            .iter()
            .enumerate()
            .map(|(k, c)| c.area * dofs.cell(k) * dofs.cell(k))
            .sum::<T>()
            .sqrt()
    }
}
