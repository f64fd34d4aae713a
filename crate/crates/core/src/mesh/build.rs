use std::collections::HashMap;

use super::{Cell, Face, MeshError, PolytopalMesh};
use crate::geometry::{polygon_centroid, polygon_diameter, signed_area, Vec2};
use crate::scalar::Scalar;

const MIN_AREA: f64 = 1e-14;

/// Builds a mesh from vertex coordinates and counterclockwise cell vertex
/// lists. Faces are deduplicated by their (unordered) vertex pair; the first
/// cell to visit a face becomes its owner.
pub fn build_mesh<T: Scalar>(
    vertices: Vec<Vec2<T>>,
    cell_vertex_lists: Vec<Vec<usize>>,
) -> Result<PolytopalMesh<T>, MeshError> {
    if cell_vertex_lists.is_empty() {
        return Err(MeshError::Empty);
    }
    let nv = vertices.len();
    let mut faces: Vec<Face<T>> = Vec::new();
    let mut cells: Vec<Cell<T>> = Vec::with_capacity(cell_vertex_lists.len());
    // (min, max) vertex pair -> face id
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();

    for (k, ids) in cell_vertex_lists.into_iter().enumerate() {
        if let Some(&bad) = ids.iter().find(|&&v| v >= nv) {
            return Err(MeshError::VertexOutOfRange {
                cell: k,
                vertex: bad,
                n_vertices: nv,
            });
        }
        let pts: Vec<Vec2<T>> = ids.iter().map(|&v| vertices[v]).collect();
        let area = if ids.len() < 3 {
            T::zero()
        } else {
            signed_area(&pts)
        };
        if area.abs() <= T::lit(MIN_AREA) || has_repeated_vertex(&ids) {
            return Err(MeshError::DegenerateCell {
                cell: k,
                area: area.to_f64_lossy(),
            });
        }
        if area < T::zero() {
            return Err(MeshError::InconsistentOrientation(k));
        }

        let m = ids.len();
        let mut face_ids = Vec::with_capacity(m);
        let mut owns_face = Vec::with_capacity(m);
        for i in 0..m {
            let a = ids[i];
            let b = ids[(i + 1) % m];
            let key = (a.min(b), a.max(b));
            match lookup.get(&key) {
                None => {
                    let pa = vertices[a];
                    let pb = vertices[b];
                    let measure = pa.distance(pb);
                    let id = faces.len();
                    faces.push(Face {
                        vertex_ids: [a, b],
                        measure,
                        midpoint: pa.lerp(pb, T::lit(0.5)),
                        owner: k,
                        neighbor: None,
                        normal: (pb - pa).perp_cw() / measure,
                    });
                    lookup.insert(key, id);
                    face_ids.push(id);
                    owns_face.push(true);
                }
                Some(&id) => {
                    let face = &mut faces[id];
                    if face.neighbor.is_some() || face.owner == k {
                        return Err(MeshError::NonManifoldFace(key.0, key.1));
                    }
                    // a consistently oriented neighbour traverses the edge backwards
                    if face.vertex_ids != [b, a] {
                        return Err(MeshError::InconsistentOrientation(k));
                    }
                    face.neighbor = Some(k);
                    face_ids.push(id);
                    owns_face.push(false);
                }
            }
        }

        cells.push(Cell {
            barycenter: polygon_centroid(&pts),
            diameter: polygon_diameter(&pts),
            area,
            vertex_ids: ids,
            face_ids,
            owns_face,
        });
    }

    let h = cells.iter().map(|c| c.diameter).fold(T::zero(), T::max);
    Ok(PolytopalMesh {
        vertices,
        cells,
        faces,
        h,
    })
}

fn has_repeated_vertex(ids: &[usize]) -> bool {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}
