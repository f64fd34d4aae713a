use super::SolverError;
use crate::gdm::{DofVector, Hmm};
use crate::linalg::CsrMatrix;
use crate::models::ModelSpec;
use crate::scalar::Scalar;

/// Linear system of one Picard iteration of one implicit Euler step.
/// Constrained (boundary-face) rows are identity rows and their columns have
/// been moved to the right-hand side.
#[derive(Clone, Debug)]
pub struct StepSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    /// `(dof, prescribed value)`, ascending by dof.
    pub constrained: Vec<(usize, T)>,
}

/// Caches the sparsity pattern and the frozen-independent part
/// `|K|/δt · mass + λ · diffusion` for a fixed time step.
#[derive(Clone, Debug)]
pub struct StepAssembler<'a, 'm, T> {
    hmm: &'a Hmm<'m, T>,
    model: &'a ModelSpec<T>,
    dt: T,
    /// pattern with the constant part in its values
    base: CsrMatrix<T>,
    /// per cell, row-major `(1+m)²` storage positions of the local block
    slots: Vec<Vec<usize>>,
}

impl<'a, 'm, T: Scalar> StepAssembler<'a, 'm, T> {
    pub fn new(hmm: &'a Hmm<'m, T>, model: &'a ModelSpec<T>, dt: T) -> Self {
        let n = hmm.space().len();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in hmm.locals() {
            for &i in &c.dofs {
                rows[i].extend_from_slice(&c.dofs);
            }
        }
        let mut base = CsrMatrix::from_pattern(n, rows);
        let slots: Vec<Vec<usize>> = hmm
            .locals()
            .iter()
            .map(|c| {
                c.dofs
                    .iter()
                    .flat_map(|&i| c.dofs.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| base.position(i, j).expect("local block in pattern"))
                    .collect()
            })
            .collect();
        let lambda = model.lambda;
        for (c, slot) in hmm.locals().iter().zip(&slots) {
            let a = c.diffusion_matrix();
            let vals = base.values_mut();
            for (p, &s) in slot.iter().enumerate() {
                vals[s] += lambda * a.data[p];
            }
            vals[slot[0]] += c.area / dt;
        }
        Self {
            hmm,
            model,
            dt,
            base,
            slots,
        }
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Assembles the system for unknown `c^{m+1}` given the previous state and
    /// the frozen iterate feeding `g` and `f`. Returns the number of clamped
    /// nonlinearity arguments alongside.
    pub fn assemble(
        &self,
        prev: &DofVector<T>,
        frozen: &DofVector<T>,
        t_next: T,
    ) -> Result<(StepSystem<T>, usize), SolverError> {
        let space = self.hmm.space();
        for v in [prev, frozen] {
            if !v.matches(space) {
                return Err(SolverError::DimensionMismatch {
                    expected: space.len(),
                    found: v.len(),
                });
            }
        }
        let mut matrix = self.base.clone();
        let mut rhs = vec![T::zero(); space.len()];
        let mut clamps = 0;
        for (c, slot) in self.hmm.locals().iter().zip(&self.slots) {
            let (arg, clamped) = self.model.nonlinearity_argument(frozen.cell(c.cell));
            clamps += usize::from(clamped);
            let (a0, a) = self.model.convection_coefficients((self.model.g)(arg));
            let reaction = (self.model.f)(arg);
            rhs[c.dofs[0]] += c.area * (prev.cell(c.cell) / self.dt + reaction - a0);
            // |K| a·G_K(c) = Σ_σ |σ| (a·n_{K,σ}) c_σ
            let vals = matrix.values_mut();
            for (i, (&m, &n)) in c.face_measures.iter().zip(&c.normals).enumerate() {
                vals[slot[i + 1]] += m * a.dot(n);
            }
        }

        let mesh = self.hmm.mesh();
        let constrained: Vec<(usize, T)> = space
            .boundary_faces()
            .iter()
            .map(|&f| {
                (
                    space.face_dof(f),
                    (self.model.boundary_trace)(mesh.faces[f].midpoint, t_next),
                )
            })
            .collect();
        eliminate_constraints(&mut matrix, &mut rhs, &constrained, |i| space.is_constrained(i));
        Ok((
            StepSystem {
                matrix,
                rhs,
                constrained,
            },
            clamps,
        ))
    }
}

/// Row/column elimination of prescribed values; keeps the pattern.
pub(crate) fn eliminate_constraints<T: Scalar>(
    matrix: &mut CsrMatrix<T>,
    rhs: &mut [T],
    constrained: &[(usize, T)],
    is_constrained: impl Fn(usize) -> bool,
) {
    for &(j, value) in constrained {
        let cols: Vec<usize> = matrix.row(j).0.to_vec();
        for i in cols {
            if i == j || is_constrained(i) {
                continue;
            }
            let p = matrix.position(i, j).expect("symmetric pattern");
            let aij = matrix.values()[p];
            rhs[i] -= aij * value;
            matrix.values_mut()[p] = T::zero();
        }
        let start = matrix.row_ptr()[j];
        let end = matrix.row_ptr()[j + 1];
        for p in start..end {
            let col = matrix.col_idx()[p];
            matrix.values_mut()[p] = if col == j { T::one() } else { T::zero() };
        }
        rhs[j] = value;
    }
}

/// One-shot assembly; see [`StepAssembler::assemble`].
pub fn assemble_step<T: Scalar>(
    hmm: &Hmm<'_, T>,
    model: &ModelSpec<T>,
    prev: &DofVector<T>,
    frozen: &DofVector<T>,
    t_next: T,
    dt: T,
) -> Result<StepSystem<T>, SolverError> {
    StepAssembler::new(hmm, model, dt)
        .assemble(prev, frozen, t_next)
        .map(|(s, _)| s)
}
