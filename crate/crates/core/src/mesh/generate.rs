//! Deterministic generators for the four mesh families on the unit square.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{build_mesh, MeshError, PolytopalMesh};
use crate::geometry::Vec2;
use crate::scalar::Scalar;

/// Generators refuse to produce more cells than this.
pub const MAX_GENERATED_CELLS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// Each square of an n×n grid split into four triangles by its diagonals.
    Triangular,
    /// Staggered hexagonal cells, truncated to quadrilaterals and pentagons
    /// along the boundary.
    Hexagonal,
    /// Uniform quadrilateral grid pushed through a smooth skew map.
    DistortedQuad,
    /// Uniform squares with the lower-left quadrant refined once more;
    /// coarse neighbours of the refined zone carry hanging nodes.
    LocallyRefinedNonConforming,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [
        FamilyTag::Triangular,
        FamilyTag::Hexagonal,
        FamilyTag::DistortedQuad,
        FamilyTag::LocallyRefinedNonConforming,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Triangular => "triangular",
            FamilyTag::Hexagonal => "hexagonal",
            FamilyTag::DistortedQuad => "distorted",
            FamilyTag::LocallyRefinedNonConforming => "nonconforming",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "triangular" | "tri" => Ok(FamilyTag::Triangular),
            "hexagonal" | "hex" => Ok(FamilyTag::Hexagonal),
            "distorted" | "distortedquad" | "distorted-quad" => Ok(FamilyTag::DistortedQuad),
            "nonconforming" | "locally-refined" | "locallyrefinednonconforming" | "lr" => {
                Ok(FamilyTag::LocallyRefinedNonConforming)
            }
            other => Err(format!(
                "unknown mesh family '{other}' (expected triangular, hexagonal, distorted or nonconforming)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MeshFamily {
    pub tag: FamilyTag,
    pub level: usize,
}

impl MeshFamily {
    pub fn new(tag: FamilyTag, level: usize) -> Self {
        Self { tag, level }
    }

    /// Number of cells [`generate`] would create, or `None` for level 0.
    pub fn cell_count(&self) -> Option<usize> {
        if self.level == 0 {
            return None;
        }
        let n = self.resolution()?;
        Some(match self.tag {
            FamilyTag::Triangular => n.checked_mul(n)?.checked_mul(4)?,
            FamilyTag::Hexagonal => {
                let (m, r) = hex_grid(self.level)?;
                // even rows: m/2 bricks, odd rows: m/2 - 1 bricks + 2 halves
                (r / 2 + r % 2) * (m / 2) + (r / 2) * (m / 2 + 1)
            }
            FamilyTag::DistortedQuad => n.checked_mul(n)?,
            FamilyTag::LocallyRefinedNonConforming => {
                let quarter = (n / 2) * (n / 2);
                n.checked_mul(n)? - quarter + 4 * quarter
            }
        })
    }

    /// Base grid resolution of the level.
    fn resolution(&self) -> Option<usize> {
        let doubling = 1usize.checked_shl(u32::try_from(self.level - 1).ok()?)?;
        match self.tag {
            FamilyTag::Triangular | FamilyTag::LocallyRefinedNonConforming => {
                8usize.checked_mul(doubling)
            }
            FamilyTag::Hexagonal => hex_grid(self.level).map(|(m, _)| m),
            // h follows the sequence 1, 2/3, 1/2, 2/5, ... of the level-1 size
            FamilyTag::DistortedQuad => 7usize.checked_mul(self.level + 1),
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.tag, self.level)
    }
}

/// (columns, rows) of the staggered brick layout behind the hexagonal family.
fn hex_grid(level: usize) -> Option<(usize, usize)> {
    let doubling = 1usize.checked_shl(u32::try_from(level.checked_sub(1)?).ok()?)?;
    Some((20usize.checked_mul(doubling)?, 10usize.checked_mul(doubling)?))
}

/// Generates a mesh of the unit square.
pub fn generate<T: Scalar>(family: MeshFamily) -> Result<PolytopalMesh<T>, MeshError> {
    let unsupported = || MeshError::UnsupportedLevel {
        family: family.tag.name().to_string(),
        level: family.level,
        max: MAX_GENERATED_CELLS,
    };
    match family.cell_count() {
        Some(c) if c <= MAX_GENERATED_CELLS => {}
        _ => return Err(unsupported()),
    }
    let n = family.resolution().ok_or_else(unsupported)?;
    let (vertices, cells) = match family.tag {
        FamilyTag::Triangular => triangular(n),
        FamilyTag::Hexagonal => {
            let (m, r) = hex_grid(family.level).ok_or_else(unsupported)?;
            hexagonal(m, r)
        }
        FamilyTag::DistortedQuad => distorted(n),
        FamilyTag::LocallyRefinedNonConforming => locally_refined(n),
    };
    build_mesh(vertices, cells)
}

type Raw<T> = (Vec<Vec2<T>>, Vec<Vec<usize>>);

fn frac<T: Scalar>(i: usize, n: usize) -> T {
    T::from_usize_lossy(i) / T::from_usize_lossy(n)
}

fn triangular<T: Scalar>(n: usize) -> Raw<T> {
    let grid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1) + n * n);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Vec2::new(frac(i, n), frac(j, n)));
        }
    }
    let half = T::lit(0.5);
    let mut cells = Vec::with_capacity(4 * n * n);
    for j in 0..n {
        for i in 0..n {
            let center = vertices.len();
            vertices.push(Vec2::new(
                (T::from_usize_lossy(i) + half) / T::from_usize_lossy(n),
                (T::from_usize_lossy(j) + half) / T::from_usize_lossy(n),
            ));
            let (a, b, c, d) = (grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1));
            cells.push(vec![a, b, center]);
            cells.push(vec![b, c, center]);
            cells.push(vec![c, d, center]);
            cells.push(vec![d, a, center]);
        }
    }
    (vertices, cells)
}

fn hexagonal<T: Scalar>(m: usize, r: usize) -> Raw<T> {
    // Brick layout: vertex (i, j) sits at (i/m, j/r); interior horizontal
    // lines zig-zag by ±height/7, which turns bricks into hexagons.
    let grid = |i: usize, j: usize| j * (m + 1) + i;
    let amp = T::one() / (T::lit(7.0) * T::from_usize_lossy(r));
    let mut vertices = Vec::with_capacity((m + 1) * (r + 1));
    for j in 0..=r {
        for i in 0..=m {
            let mut y = frac(j, r);
            if j > 0 && j < r {
                y += if (i + j) % 2 == 0 { amp } else { -amp };
            }
            vertices.push(Vec2::new(frac(i, m), y));
        }
    }
    let mut cells = Vec::new();
    for j in 0..r {
        let mut i = 0;
        if j % 2 == 1 {
            cells.push(vec![grid(0, j), grid(1, j), grid(1, j + 1), grid(0, j + 1)]);
            i = 1;
        }
        while i < m {
            if i + 2 <= m {
                cells.push(vec![
                    grid(i, j),
                    grid(i + 1, j),
                    grid(i + 2, j),
                    grid(i + 2, j + 1),
                    grid(i + 1, j + 1),
                    grid(i, j + 1),
                ]);
                i += 2;
            } else {
                cells.push(vec![grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)]);
                i += 1;
            }
        }
    }
    (vertices, cells)
}

/// Smooth skew map; vanishes on the boundary of the unit square.
fn skew<T: Scalar>(p: Vec2<T>) -> Vec2<T> {
    let two_pi = T::lit(2.0) * T::PI();
    let d = T::lit(0.1) * (two_pi * p.x).sin() * (two_pi * p.y).sin();
    Vec2::new(p.x + d, p.y + d)
}

fn distorted<T: Scalar>(n: usize) -> Raw<T> {
    let grid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let p = Vec2::new(frac(i, n), frac(j, n));
            let on_boundary = i == 0 || j == 0 || i == n || j == n;
            vertices.push(if on_boundary { p } else { skew(p) });
        }
    }
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)]);
        }
    }
    (vertices, cells)
}

fn locally_refined<T: Scalar>(n: usize) -> Raw<T> {
    // Work on the fine lattice (2n+1)^2 and keep only the points in use.
    let refined = |i: usize, j: usize| i < n / 2 && j < n / 2;
    let mut compact: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices: Vec<Vec2<T>> = Vec::new();
    let mut id = |i: usize, j: usize, vertices: &mut Vec<Vec2<T>>| -> usize {
        *compact.entry((i, j)).or_insert_with(|| {
            vertices.push(Vec2::new(frac(i, 2 * n), frac(j, 2 * n)));
            vertices.len() - 1
        })
    };
    let mut cells = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (fi, fj) = (2 * i, 2 * j);
            if refined(i, j) {
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let (x, y) = (fi + di, fj + dj);
                    cells.push(vec![
                        id(x, y, &mut vertices),
                        id(x + 1, y, &mut vertices),
                        id(x + 1, y + 1, &mut vertices),
                        id(x, y + 1, &mut vertices),
                    ]);
                }
                continue;
            }
            let mut poly = vec![id(fi, fj, &mut vertices)];
            if j > 0 && refined(i, j - 1) {
                poly.push(id(fi + 1, fj, &mut vertices));
            }
            poly.push(id(fi + 2, fj, &mut vertices));
            if i + 1 < n && refined(i + 1, j) {
                poly.push(id(fi + 2, fj + 1, &mut vertices));
            }
            poly.push(id(fi + 2, fj + 2, &mut vertices));
            if j + 1 < n && refined(i, j + 1) {
                poly.push(id(fi + 1, fj + 2, &mut vertices));
            }
            poly.push(id(fi, fj + 2, &mut vertices));
            if i > 0 && refined(i - 1, j) {
                poly.push(id(fi, fj + 1, &mut vertices));
            }
            cells.push(poly);
        }
    }
    (vertices, cells)
}
