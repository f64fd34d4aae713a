//! Plain-text mesh format.
//!
//! ```text
//! # comment
//! VERTICES
//! <count>
//! <x> <y>
//! ...
//! CELLS
//! <count>
//! <v0> <v1> <v2> ...
//! ```
//!
//! Ids are 0-based and cells list their vertices counterclockwise. Only the
//! vertex coordinates and cell lists are stored; everything else is
//! recomputed on read.

use std::io::{BufRead, Write};

use super::{build_mesh, MeshError, PolytopalMesh};
use crate::geometry::Vec2;
use crate::scalar::Scalar;

pub fn write_mesh<T: Scalar, W: Write>(mesh: &PolytopalMesh<T>, mut sink: W) -> Result<(), MeshError> {
    sink.write_all(write_mesh_string(mesh).as_bytes())
        .map_err(|e| MeshError::Io(e.to_string()))
}

pub fn write_mesh_string<T: Scalar>(mesh: &PolytopalMesh<T>) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "# polygonal mesh: {} cells, {} faces", mesh.n_cells(), mesh.n_faces());
    let _ = writeln!(out, "VERTICES\n{}", mesh.vertices.len());
    for v in &mesh.vertices {
        let _ = writeln!(out, "{} {}", v.x, v.y);
    }
    let _ = writeln!(out, "CELLS\n{}", mesh.cells.len());
    for c in &mesh.cells {
        let ids: Vec<String> = c.vertex_ids.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

pub fn read_mesh<T: Scalar, R: BufRead>(source: R) -> Result<PolytopalMesh<T>, MeshError> {
    let mut text = String::new();
    let mut source = source;
    source
        .read_to_string(&mut text)
        .map_err(|e| MeshError::Io(e.to_string()))?;
    read_mesh_str(&text)
}

pub fn read_mesh_str<T: Scalar>(text: &str) -> Result<PolytopalMesh<T>, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);
    let err = |line: usize, msg: String| MeshError::Parse { line, msg };

    let expect_header = |name: &str, lines: &mut dyn Iterator<Item = (usize, &str)>| {
        match lines.next() {
            Some((_, l)) if l.eq_ignore_ascii_case(name) => Ok(()),
            Some((n, l)) => Err(err(n, format!("expected '{name}', found '{l}'"))),
            None => Err(err(last_line, format!("missing '{name}' section"))),
        }
    };
    let count = |lines: &mut dyn Iterator<Item = (usize, &str)>| match lines.next() {
        Some((n, l)) => l
            .parse::<usize>()
            .map_err(|_| err(n, format!("expected a count, found '{l}'"))),
        None => Err(err(last_line, "missing count".into())),
    };

    expect_header("VERTICES", &mut lines)?;
    let nv = count(&mut lines)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines
            .next()
            .ok_or_else(|| err(last_line, "unexpected end of vertex list".into()))?;
        let xy: Vec<&str> = l.split_whitespace().collect();
        if xy.len() != 2 {
            return Err(err(n, format!("expected two coordinates, found '{l}'")));
        }
        let parse = |s: &str| {
            s.parse::<T>()
                .map_err(|_| err(n, format!("invalid coordinate '{s}'")))
        };
        vertices.push(Vec2::new(parse(xy[0])?, parse(xy[1])?));
    }

    expect_header("CELLS", &mut lines)?;
    let nc = count(&mut lines)?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, l) = lines
            .next()
            .ok_or_else(|| err(last_line, "unexpected end of cell list".into()))?;
        let mut ids = Vec::new();
        for tok in l.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(n, format!("invalid vertex id '{tok}'")))?;
            if v >= nv {
                return Err(err(n, format!("vertex id {v} out of range (have {nv})")));
            }
            ids.push(v);
        }
        cells.push(ids);
    }
    if let Some((n, l)) = lines.next() {
        return Err(err(n, format!("trailing content '{l}'")));
    }
    build_mesh(vertices, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, FamilyTag, MeshFamily};

    #[test]
    fn round_trip_hexagonal() {
        let m: PolytopalMesh<f64> = generate(MeshFamily::new(FamilyTag::Hexagonal, 1)).unwrap();
        let text = write_mesh_string(&m);
        let back: PolytopalMesh<f64> = read_mesh_str(&text).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.cell_vertex_lists(), m.cell_vertex_lists());
        assert_eq!(back.h, m.h);
    }

    #[test]
    fn missing_vertex_is_parse_error() {
        let text = "VERTICES\n3\n0 0\n1 0\n0 1\nCELLS\n1\n0 1 5\n";
        match read_mesh_str::<f64>(text) {
            Err(MeshError::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicated_cell_is_non_manifold() {
        let text = "VERTICES\n4\n0 0\n1 0\n1 1\n0 1\nCELLS\n3\n0 1 2\n0 2 3\n0 2 3\n";
        assert!(matches!(
            read_mesh_str::<f64>(text),
            Err(MeshError::NonManifoldFace(0, 2))
        ));
    }

    #[test]
    fn empty_and_malformed() {
        assert!(matches!(read_mesh_str::<f64>(""), Err(MeshError::Parse { .. })));
        assert!(matches!(
            read_mesh_str::<f64>("# just a comment\n"),
            Err(MeshError::Parse { .. })
        ));
        let text = "VERTICES\n1\n0 zero\nCELLS\n0\n";
        assert!(matches!(
            read_mesh_str::<f64>(text),
            Err(MeshError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn comments_are_ignored() {
        let text = "# unit square\nVERTICES # section\n4\n0 0\n1 0\n1 1\n0 1 # last\nCELLS\n1\n0 1 2 3\n";
        let m: PolytopalMesh<f64> = read_mesh_str(text).unwrap();
        assert_eq!(m.n_cells(), 1);
    }
}
