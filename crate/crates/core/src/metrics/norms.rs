use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::quadrature::half_diamond_points;
use crate::geometry::Vec2;
use crate::gdm::{DofVector, Hmm};
use crate::models::ModelSpec;
use crate::scalar::Scalar;

/// How exact-solution integrals are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorNorm {
    /// Three-point rule on every half-diamond triangle `(x_K, a, b)`.
    #[default]
    Quadrature,
    /// Exact solution and gradient sampled at `x_K` only and weighted by
    /// `|K|`; compared with `c_K` and with the consistent cell gradient
    /// `G_K c`. Both are superconvergent on smooth meshes.
    CellCenter,
}

impl FromStr for ErrorNorm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "quadrature" | "quad" => Ok(Self::Quadrature),
            "cell-center" | "cellcenter" | "center" => Ok(Self::CellCenter),
            other => Err(format!("unknown error norm '{other}'")),
        }
    }
}

impl fmt::Display for ErrorNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Quadrature => "quadrature",
            Self::CellCenter => "cell-center",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorPair<T> {
    pub absolute: T,
    pub relative: T,
}

impl<T: Scalar> ErrorPair<T> {
    /// `relative = absolute / reference`; if the reference vanishes the
    /// absolute value is reported as relative too.
    fn new(err_sq: T, ref_sq: T) -> Self {
        let absolute = err_sq.max(T::zero()).sqrt();
        let reference = ref_sq.max(T::zero()).sqrt();
        let relative = if reference > T::zero() {
            absolute / reference
        } else {
            absolute
        };
        Self { absolute, relative }
    }
}

/// Sums per-cell `(error², reference²)` pairs in cell order, so results do
/// not depend on thread scheduling.
fn ordered_sum<T: Scalar>(hmm: &Hmm<'_, T>, per_cell: impl Fn(usize) -> (T, T) + Sync) -> (T, T) {
    let parts: Vec<(T, T)> = (0..hmm.locals().len()).into_par_iter().map(&per_cell).collect();
    parts
        .into_iter()
        .fold((T::zero(), T::zero()), |(a, b), (x, y)| (a + x, b + y))
}

/// `‖c̄ − Π_D c‖_{L²}` and its ratio to `‖c̄‖_{L²}`.
pub fn l2_error_solution<T: Scalar>(
    hmm: &Hmm<'_, T>,
    dofs: &DofVector<T>,
    exact: impl Fn(Vec2<T>) -> T + Sync,
    norm: ErrorNorm,
) -> ErrorPair<T> {
    let mesh = hmm.mesh();
    let (e, r) = ordered_sum(hmm, |k| {
        let local = hmm.local(k);
        let ck = dofs.cell(k);
        match norm {
            ErrorNorm::Quadrature => (0..local.n_faces())
                .flat_map(|j| half_diamond_points(mesh, local, j))
                .fold((T::zero(), T::zero()), |(e, r), (x, w)| {
                    let v = exact(x);
                    (e + w * (v - ck).powi(2), r + w * v * v)
                }),
            ErrorNorm::CellCenter => {
                let v = exact(local.barycenter);
                (local.area * (v - ck).powi(2), local.area * v * v)
            }
        }
    });
    ErrorPair::new(e, r)
}

/// `‖∇c̄ − ∇_D c‖_{L²}` and its ratio to `‖∇c̄‖_{L²}`. With
/// [`ErrorNorm::Quadrature`] the stabilised gradient is integrated
/// half-diamond by half-diamond.
pub fn l2_error_gradient<T: Scalar>(
    hmm: &Hmm<'_, T>,
    dofs: &DofVector<T>,
    exact_grad: impl Fn(Vec2<T>) -> Vec2<T> + Sync,
    norm: ErrorNorm,
) -> ErrorPair<T> {
    let mesh = hmm.mesh();
    let (e, r) = ordered_sum(hmm, |k| {
        let local = hmm.local(k);
        let u = hmm.gather(dofs, k);
        match norm {
            ErrorNorm::Quadrature => {
                let mut acc = (T::zero(), T::zero());
                for j in 0..local.n_faces() {
                    let g = local.half_diamond_gradient(&u, j);
                    for (x, w) in half_diamond_points(mesh, local, j) {
                        let v = exact_grad(x);
                        acc.0 += w * (v - g).norm_squared();
                        acc.1 += w * v.norm_squared();
                    }
                }
                acc
            }
            ErrorNorm::CellCenter => {
                let v = exact_grad(local.barycenter);
                let g = local.consistent_gradient(&u);
                (local.area * (v - g).norm_squared(), local.area * v.norm_squared())
            }
        }
    });
    ErrorPair::new(e, r)
}

/// `‖φ‖_{L²}` by quadrature.
pub fn l2_norm<T: Scalar>(hmm: &Hmm<'_, T>, field: impl Fn(Vec2<T>) -> T + Sync) -> T {
    l2_error_solution(hmm, &DofVector::zeros(hmm.space()), field, ErrorNorm::Quadrature).absolute
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionErrors<T> {
    pub solution: ErrorPair<T>,
    pub gradient: ErrorPair<T>,
}

/// Both errors of `dofs` against the model's exact solution at time `t`;
/// `None` if the model has no exact solution.
pub fn solution_errors<T: Scalar>(
    hmm: &Hmm<'_, T>,
    model: &ModelSpec<T>,
    dofs: &DofVector<T>,
    t: T,
    norm: ErrorNorm,
) -> Option<SolutionErrors<T>> {
    let exact = model.exact.as_ref()?;
    Some(SolutionErrors {
        solution: l2_error_solution(hmm, dofs, |x| (exact.value)(x, t), norm),
        gradient: l2_error_gradient(hmm, dofs, |x| (exact.gradient)(x, t), norm),
    })
}
