use std::collections::BTreeMap;
use std::sync::Arc;

use super::quadrature::{half_diamond_points, integrate_cell};
use super::MetricsError;
use crate::geometry::Vec2;
use crate::gdm::{DofVector, Hmm};
use crate::linalg::{dot, norm2, pcg, CsrMatrix, Ilu0};
use crate::scalar::Scalar;
use crate::solver::eliminate_constraints;

/// Scalar probe `w` with its gradient.
#[derive(Clone)]
pub struct ScalarProbe<T> {
    pub name: String,
    pub value: Arc<dyn Fn(Vec2<T>) -> T + Send + Sync>,
    pub gradient: Arc<dyn Fn(Vec2<T>) -> Vec2<T> + Send + Sync>,
}

/// Vector probe `ξ` with its divergence.
#[derive(Clone)]
pub struct VectorProbe<T> {
    pub name: String,
    pub value: Arc<dyn Fn(Vec2<T>) -> Vec2<T> + Send + Sync>,
    pub divergence: Arc<dyn Fn(Vec2<T>) -> T + Send + Sync>,
}

/// `sin(πx) sin(πy)`.
pub fn probe_bubble<T: Scalar>() -> ScalarProbe<T> {
    let pi = T::PI();
    ScalarProbe {
        name: "sin-bubble".into(),
        value: Arc::new(move |x: Vec2<T>| (pi * x.x).sin() * (pi * x.y).sin()),
        gradient: Arc::new(move |x: Vec2<T>| {
            let (sx, cx) = (pi * x.x).sin_cos();
            let (sy, cy) = (pi * x.y).sin_cos();
            Vec2::new(pi * cx * sy, pi * sx * cy)
        }),
    }
}

/// `ξ = (∂_y ψ, −∂_x ψ)` for `ψ = (x y (1−x)(1−y))²`; divergence free and
/// vanishing on the boundary of the unit square.
pub fn probe_curl_bubble<T: Scalar>() -> VectorProbe<T> {
    VectorProbe {
        name: "curl-bubble".into(),
        value: Arc::new(|x: Vec2<T>| {
            let one = T::one();
            let two = T::lit(2.0);
            let (a, b) = (x.x * (one - x.x), x.y * (one - x.y));
            let (da, db) = (one - two * x.x, one - two * x.y);
            // ψ = a² b²
            Vec2::new(two * a * a * b * db, -(two * a * da * b * b))
        }),
        divergence: Arc::new(|_| T::zero()),
    }
}

/// Global `∇_D` Gram matrix (unit diffusion), all dofs.
pub fn gradient_gram<T: Scalar>(hmm: &Hmm<'_, T>) -> CsrMatrix<T> {
    let mut trip = Vec::new();
    for c in hmm.locals() {
        let a = c.diffusion_matrix();
        for (p, &i) in c.dofs.iter().enumerate() {
            for (q, &j) in c.dofs.iter().enumerate() {
                trip.push((i, j, a.get(p, q)));
            }
        }
    }
    CsrMatrix::from_triplets(hmm.space().len(), &trip)
}

/// Homogeneous version: boundary rows and columns replaced by identity.
fn homogeneous_gram<T: Scalar>(hmm: &Hmm<'_, T>, extra_cell_diag: impl Fn(usize) -> T) -> CsrMatrix<T> {
    let space = hmm.space();
    let mut s = gradient_gram(hmm);
    for k in 0..space.n_cells() {
        let i = space.cell_dof(k);
        let p = s.position(i, i).expect("diagonal present");
        s.values_mut()[p] += extra_cell_diag(k);
    }
    let constrained: Vec<(usize, T)> = space.boundary_dofs().map(|d| (d, T::zero())).collect();
    let mut dummy = vec![T::zero(); space.len()];
    eliminate_constraints(&mut s, &mut dummy, &constrained, |i| space.is_constrained(i));
    s
}

fn spd_solve<T: Scalar>(
    a: &CsrMatrix<T>,
    pre: &Ilu0<T>,
    b: &[T],
    x: &mut [T],
) -> Result<(), MetricsError> {
    let max_iter = 500 + a.dim().min(50_000);
    pcg(a, b, x, pre, T::lit(1e-13).max(T::epsilon() * T::lit(100.0)), max_iter)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoercivityEstimate<T> {
    pub value: T,
    pub iterations: usize,
    /// `‖M u − μ S u‖ / ‖M u‖` at the returned pair.
    pub residual: T,
}

/// `C_D = max ‖Π_D u‖ / ‖∇_D u‖` over `X_{D,0}`: square root of the largest
/// `μ` with `M u = μ S u`, by power iteration on `S⁻¹M`.
pub fn coercivity_constant<T: Scalar>(hmm: &Hmm<'_, T>) -> Result<CoercivityEstimate<T>, MetricsError> {
    let space = hmm.space();
    let n = space.len();
    let s = homogeneous_gram(hmm, |_| T::zero());
    let pre = Ilu0::new(&s)?;
    let areas: Vec<T> = hmm.locals().iter().map(|c| c.area).collect();
    let mass = |u: &[T]| {
        let mut out = vec![T::zero(); n];
        for (k, &a) in areas.iter().enumerate() {
            let i = space.cell_dof(k);
            out[i] = a * u[i];
        }
        out
    };
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(1e4));
    let mut u = vec![T::zero(); n];
    for k in 0..space.n_cells() {
        u[space.cell_dof(k)] = T::one();
    }
    let mut z = vec![T::zero(); n];
    let mut residual = T::infinity();
    let max_iter = 500;
    for it in 1..=max_iter {
        let mu_u = mass(&u);
        spd_solve(&s, &pre, &mu_u, &mut z)?;
        let mz = mass(&z);
        let sz = s.mul_vec(&z);
        let mu = dot(&z, &mz) / dot(&z, &sz);
        let r: Vec<T> = mz.iter().zip(&sz).map(|(&a, &b)| a - mu * b).collect();
        residual = norm2(&r) / norm2(&mz);
        let scale = T::one() / norm2(&z);
        u.iter_mut().zip(&z).for_each(|(ui, &zi)| *ui = zi * scale);
        z.iter_mut().for_each(|v| *v *= scale);
        if residual <= tol {
            return Ok(CoercivityEstimate {
                value: mu.sqrt(),
                iterations: it,
                residual,
            });
        }
    }
    Err(MetricsError::EigSolveFailed {
        iterations: max_iter,
        residual: residual.to_f64_lossy(),
    })
}

/// `‖Π_D u − w‖ + ‖∇_D u − ∇w‖` (sum of norms) by quadrature.
pub fn pd_objective<T: Scalar>(hmm: &Hmm<'_, T>, u: &DofVector<T>, w: &ScalarProbe<T>) -> T {
    let mesh = hmm.mesh();
    let mut val = T::zero();
    let mut grad = T::zero();
    for (k, local) in hmm.locals().iter().enumerate() {
        let ul = hmm.gather(u, k);
        let ck = u.cell(k);
        for j in 0..local.n_faces() {
            let g = local.half_diamond_gradient(&ul, j);
            for (x, wt) in half_diamond_points(mesh, local, j) {
                val += wt * ((w.value)(x) - ck).powi(2);
                grad += wt * ((w.gradient)(x) - g).norm_squared();
            }
        }
    }
    val.sqrt() + grad.sqrt()
}

/// Minimiser over `X_{D,0}` of `‖Π_D u − w‖² + ‖∇_D u − ∇w‖²`.
pub fn interpolant_pd<T: Scalar>(hmm: &Hmm<'_, T>, w: &ScalarProbe<T>) -> Result<DofVector<T>, MetricsError> {
    let space = hmm.space();
    let mesh = hmm.mesh();
    let a = homogeneous_gram(hmm, |k| hmm.local(k).area);
    let mut b = vec![T::zero(); space.len()];
    for local in hmm.locals() {
        b[local.dofs[0]] += integrate_cell(mesh, local, |x| (w.value)(x));
        for j in 0..local.n_faces() {
            let mut gint = Vec2::zero();
            for (x, wt) in half_diamond_points(mesh, local, j) {
                gint += (w.gradient)(x) * wt;
            }
            for (p, &i) in local.dofs.iter().enumerate() {
                b[i] += local.grads[j][p].dot(gint);
            }
        }
    }
    for d in space.boundary_dofs() {
        b[d] = T::zero();
    }
    let pre = Ilu0::new(&a)?;
    let mut x = vec![T::zero(); space.len()];
    spd_solve(&a, &pre, &b, &mut x)?;
    Ok(DofVector::from_vec(space, x).expect("length matches"))
}

/// `S_D(w)`: sum-of-norms objective at [`interpolant_pd`].
pub fn consistency_defect<T: Scalar>(hmm: &Hmm<'_, T>, w: &ScalarProbe<T>) -> Result<T, MetricsError> {
    let u = interpolant_pd(hmm, w)?;
    Ok(pd_objective(hmm, &u, w))
}

/// `W_D(ξ) = max_u |⟨∇_D u, ξ⟩ + ⟨Π_D u, div ξ⟩| / ‖∇_D u‖ = √(rᵀ S⁻¹ r)`.
pub fn limit_conformity_defect<T: Scalar>(hmm: &Hmm<'_, T>, xi: &VectorProbe<T>) -> Result<T, MetricsError> {
    let space = hmm.space();
    let mesh = hmm.mesh();
    let mut r = vec![T::zero(); space.len()];
    for local in hmm.locals() {
        r[local.dofs[0]] += integrate_cell(mesh, local, |x| (xi.divergence)(x));
        for j in 0..local.n_faces() {
            let mut xint = Vec2::zero();
            for (x, wt) in half_diamond_points(mesh, local, j) {
                xint += (xi.value)(x) * wt;
            }
            for (p, &i) in local.dofs.iter().enumerate() {
                r[i] += local.grads[j][p].dot(xint);
            }
        }
    }
    for d in space.boundary_dofs() {
        r[d] = T::zero();
    }
    let s = homogeneous_gram(hmm, |_| T::zero());
    let pre = Ilu0::new(&s)?;
    let mut z = vec![T::zero(); space.len()];
    spd_solve(&s, &pre, &r, &mut z)?;
    Ok(dot(&r, &z).max(T::zero()).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport<T> {
    pub h: T,
    pub c_d: T,
    pub s_d: BTreeMap<String, T>,
    pub w_d: BTreeMap<String, T>,
}

/// `C_D` plus `S_D`, `W_D` on the default probes.
pub fn quality_report<T: Scalar>(hmm: &Hmm<'_, T>) -> Result<QualityReport<T>, MetricsError> {
    let c_d = coercivity_constant(hmm)?.value;
    let w = probe_bubble();
    let xi = probe_curl_bubble();
    let mut s_d = BTreeMap::new();
    s_d.insert(w.name.clone(), consistency_defect(hmm, &w)?);
    let mut w_d = BTreeMap::new();
    w_d.insert(xi.name.clone(), limit_conformity_defect(hmm, &xi)?);
    Ok(QualityReport {
        h: hmm.mesh().h,
        c_d,
        s_d,
        w_d,
    })
}
