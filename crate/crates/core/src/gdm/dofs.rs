use std::ops::{Index, IndexMut};

use crate::mesh::PolytopalMesh;
use crate::scalar::Scalar;

/// Numbering of the discrete unknowns: cells first, then faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DofSpace {
    n_cells: usize,
    n_faces: usize,
    boundary_faces: Vec<usize>,
    constrained: Vec<bool>,
}

impl DofSpace {
    pub fn new<T: Scalar>(mesh: &PolytopalMesh<T>) -> Self {
        let n_cells = mesh.n_cells();
        let n_faces = mesh.n_faces();
        let boundary_faces: Vec<usize> = mesh
            .faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_boundary())
            .map(|(i, _)| i)
            .collect();
        let mut constrained = vec![false; n_cells + n_faces];
        for &f in &boundary_faces {
            constrained[n_cells + f] = true;
        }
        Self {
            n_cells,
            n_faces,
            boundary_faces,
            constrained,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    pub fn len(&self) -> usize {
        self.n_cells + self.n_faces
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_dof(&self, cell: usize) -> usize {
        cell
    }

    pub fn face_dof(&self, face: usize) -> usize {
        self.n_cells + face
    }

    /// Face ids on `∂Ω`, ascending.
    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }

    pub fn boundary_dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundary_faces.iter().map(move |&f| self.n_cells + f)
    }

    /// `true` for boundary-face dofs.
    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    /// Dofs of `X_{D,0}` (everything except boundary faces), ascending.
    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.constrained[i]).collect()
    }
}

/// One value per cell followed by one value per face.
#[derive(Clone, Debug, PartialEq)]
pub struct DofVector<T> {
    values: Vec<T>,
    n_cells: usize,
}

impl<T: Scalar> DofVector<T> {
    pub fn zeros(space: &DofSpace) -> Self {
        Self {
            values: vec![T::zero(); space.len()],
            n_cells: space.n_cells(),
        }
    }

    pub fn constant(space: &DofSpace, value: T) -> Self {
        Self {
            values: vec![value; space.len()],
            n_cells: space.n_cells(),
        }
    }

    /// Wraps raw values; `None` when the length does not match `space`.
    pub fn from_vec(space: &DofSpace, values: Vec<T>) -> Option<Self> {
        (values.len() == space.len()).then_some(Self {
            values,
            n_cells: space.n_cells(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell(&self, k: usize) -> T {
        self.values[k]
    }

    pub fn cell_mut(&mut self, k: usize) -> &mut T {
        &mut self.values[k]
    }

    pub fn face(&self, f: usize) -> T {
        self.values[self.n_cells + f]
    }

    pub fn face_mut(&mut self, f: usize) -> &mut T {
        &mut self.values[self.n_cells + f]
    }

    pub fn cells(&self) -> &[T] {
        &self.values[..self.n_cells]
    }

    pub fn faces(&self) -> &[T] {
        &self.values[self.n_cells..]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn matches(&self, space: &DofSpace) -> bool {
        self.values.len() == space.len() && self.n_cells == space.n_cells()
    }

    /// `self - other`, entrywise.
    pub fn difference(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
            n_cells: self.n_cells,
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * s).collect(),
            n_cells: self.n_cells,
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T> Index<usize> for DofVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

impl<T> IndexMut<usize> for DofVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.values[i]
    }
}
