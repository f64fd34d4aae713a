use crate::geometry::Vec2;
use crate::gdm::LocalCell;
use crate::mesh::PolytopalMesh;
use crate::scalar::Scalar;

/// Three-point interior rule on a triangle, exact for quadratics: the
/// points with barycentric coordinates (2/3, 1/6, 1/6) and permutations,
/// equal weights.
pub fn triangle_points<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> [(Vec2<T>, T); 3] {
    let area = ((b - a).cross(c - a) * T::lit(0.5)).abs();
    let w = area / T::lit(3.0);
    let (big, small) = (T::lit(2.0 / 3.0), T::lit(1.0 / 6.0));
    let at = |p: T, q: T, r: T| a * p + b * q + c * r;
    [
        (at(big, small, small), w),
        (at(small, big, small), w),
        (at(small, small, big), w),
    ]
}

/// Quadrature points of half-diamond `j` of a cell, i.e. the triangle
/// `(x_K, a, b)` on local face `j`.
pub fn half_diamond_points<T: Scalar>(
    mesh: &PolytopalMesh<T>,
    local: &LocalCell<T>,
    j: usize,
) -> [(Vec2<T>, T); 3] {
    let (a, b) = mesh.local_face_endpoints(local.cell, j);
    triangle_points(local.barycenter, a, b)
}

/// `∫_K φ` by the fan of half-diamonds.
pub fn integrate_cell<T: Scalar>(
    mesh: &PolytopalMesh<T>,
    local: &LocalCell<T>,
    field: impl Fn(Vec2<T>) -> T,
) -> T {
    (0..local.n_faces())
        .flat_map(|j| half_diamond_points(mesh, local, j))
        .map(|(x, w)| w * field(x))
        .sum()
}
