//! Polygonal meshes of a 2D domain: cells, faces (edges) and vertices with
//! the derived geometry needed by the hybrid discretisation.

mod build;
mod generate;
mod io;

pub use build::build_mesh;
pub use generate::{generate, FamilyTag, MeshFamily, MAX_GENERATED_CELLS};
pub use io::{read_mesh, read_mesh_str, write_mesh, write_mesh_string};

use thiserror::Error;

use crate::geometry::Vec2;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("face ({0}, {1}) is shared by more than two cells")]
    NonManifoldFace(usize, usize),
    #[error("cell {cell} is degenerate (area {area:e})")]
    DegenerateCell { cell: usize, area: f64 },
    #[error("cell {0} is not counterclockwise or disagrees with a neighbour on edge orientation")]
    InconsistentOrientation(usize),
    #[error("cell {cell} references vertex {vertex}, but only {n_vertices} vertices exist")]
    VertexOutOfRange {
        cell: usize,
        vertex: usize,
        n_vertices: usize,
    },
    #[error("mesh has no cells")]
    Empty,
    #[error("{family} level {level} would produce more than {max} cells")]
    UnsupportedLevel {
        family: String,
        level: usize,
        max: usize,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// A polygonal cell. Vertex `i` and vertex `i+1` bound local face `i`.
#[derive(Clone, Debug)]
pub struct Cell<T> {
    pub vertex_ids: Vec<usize>,
    pub face_ids: Vec<usize>,
    /// `true` when this cell owns the corresponding face (its normal points
    /// out of this cell).
    pub owns_face: Vec<bool>,
    /// The cell point `x_K`; the polygon's center of mass.
    pub barycenter: Vec2<T>,
    pub area: T,
    pub diameter: T,
}

#[derive(Clone, Debug)]
pub struct Face<T> {
    pub vertex_ids: [usize; 2],
    pub measure: T,
    pub midpoint: Vec2<T>,
    pub owner: usize,
    pub neighbor: Option<usize>,
    /// Unit normal pointing out of `owner`.
    pub normal: Vec2<T>,
}

impl<T> Face<T> {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct PolytopalMesh<T> {
    pub vertices: Vec<Vec2<T>>,
    pub cells: Vec<Cell<T>>,
    pub faces: Vec<Face<T>>,
    /// Maximum cell diameter.
    pub h: T,
}

impl<T: Scalar> PolytopalMesh<T> {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_boundary_faces(&self) -> usize {
        self.faces.iter().filter(|f| f.is_boundary()).count()
    }

    /// Unit normal to local face `local` of cell `cell`, outward to that cell.
    pub fn outward_normal(&self, cell: usize, local: usize) -> Vec2<T> {
        let c = &self.cells[cell];
        let n = self.faces[c.face_ids[local]].normal;
        if c.owns_face[local] {
            n
        } else {
            -n
        }
    }

    /// Orthogonal distance from `x_K` to the line carrying local face `local`.
    pub fn face_distance(&self, cell: usize, local: usize) -> T {
        let c = &self.cells[cell];
        let f = &self.faces[c.face_ids[local]];
        (f.midpoint - c.barycenter).dot(self.outward_normal(cell, local))
    }

    /// Vertex coordinates of a cell, counterclockwise.
    pub fn cell_polygon(&self, cell: usize) -> Vec<Vec2<T>> {
        self.cells[cell]
            .vertex_ids
            .iter()
            .map(|&v| self.vertices[v])
            .collect()
    }

    /// Endpoints of local face `local` of `cell`, in the cell's CCW order.
    pub fn local_face_endpoints(&self, cell: usize, local: usize) -> (Vec2<T>, Vec2<T>) {
        let ids = &self.cells[cell].vertex_ids;
        let a = ids[local];
        let b = ids[(local + 1) % ids.len()];
        (self.vertices[a], self.vertices[b])
    }

    /// Cell lists in the form accepted by [`build_mesh`].
    pub fn cell_vertex_lists(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.vertex_ids.clone()).collect()
    }

    pub fn total_area(&self) -> T {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Checks the closed-polygon identity, normal orientation and face/cell
    /// consistency. Returns the worst violation found so tests can bound it.
    pub fn geometric_defects(&self) -> MeshDefects<T> {
        let mut closure = T::zero();
        let mut normal_unit = T::zero();
        let mut min_distance = T::infinity();
        for (k, cell) in self.cells.iter().enumerate() {
            let mut sum = Vec2::zero();
            for (i, &f) in cell.face_ids.iter().enumerate() {
                let face = &self.faces[f];
                sum += self.outward_normal(k, i) * face.measure;
                normal_unit = normal_unit.max((face.normal.norm() - T::one()).abs());
                min_distance = min_distance.min(self.face_distance(k, i));
            }
            closure = closure.max(sum.norm());
        }
        MeshDefects {
            closure,
            normal_unit,
            min_distance,
        }
    }
}

/// Worst-case residuals of the mesh invariants.
#[derive(Clone, Copy, Debug)]
pub struct MeshDefects<T> {
    /// max over cells of |Σ |σ| n_{K,σ}|
    pub closure: T,
    /// max over faces of ||n| - 1|
    pub normal_unit: T,
    /// min over cells and faces of the distance from x_K to the face line
    pub min_distance: T,
}

/// Largest cell diameter.
pub fn mesh_size<T: Scalar>(mesh: &PolytopalMesh<T>) -> T {
    mesh.cells
        .iter()
        .map(|c| c.diameter)
        .fold(T::zero(), T::max)
}
