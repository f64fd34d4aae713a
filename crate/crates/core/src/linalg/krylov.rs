use super::{dot, norm2, CsrMatrix, Ilu0, LinearSolveError};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOutcome<T> {
    pub iterations: usize,
    pub relative_residual: T,
}

/// Right-preconditioned BiCGSTAB; `x` holds the initial guess on entry.
/// Converges when `‖b − A x‖ ≤ tol ‖b‖`.
pub fn bicgstab<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    precond: &Ilu0<T>,
    tol: T,
    max_iter: usize,
) -> Result<KrylovOutcome<T>, LinearSolveError> {
    let n = a.dim();
    let bnorm = norm2(b);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(KrylovOutcome {
            iterations: 0,
            relative_residual: T::zero(),
        });
    }
    let mut r = a.mul_vec(x);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut rel = norm2(&r) / bnorm;
    if rel <= tol {
        return Ok(KrylovOutcome {
            iterations: 0,
            relative_residual: rel,
        });
    }
    let mut r_hat = r.clone();
    let mut p = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut t = vec![T::zero(); n];
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let tiny = T::min_positive_value();

    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() <= tiny {
            // breakdown: restart the shadow residual from the true residual
            r_hat.copy_from_slice(&r);
            p.iter_mut().for_each(|q| *q = T::zero());
            v.iter_mut().for_each(|q| *q = T::zero());
            rho = T::one();
            alpha = T::one();
            omega = T::one();
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        y.copy_from_slice(&p);
        precond.apply_in_place(&mut y);
        a.mul_vec_into(&y, &mut v);
        let denom = dot(&r_hat, &v);
        if denom.abs() <= tiny {
            return Err(LinearSolveError::Breakdown { iterations: it });
        }
        alpha = rho / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        let snorm = norm2(&s) / bnorm;
        if snorm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return Ok(KrylovOutcome {
                iterations: it,
                relative_residual: snorm,
            });
        }
        z.copy_from_slice(&s);
        precond.apply_in_place(&mut z);
        a.mul_vec_into(&z, &mut t);
        let tt = dot(&t, &t);
        if tt <= tiny {
            return Err(LinearSolveError::Breakdown { iterations: it });
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rel = norm2(&r) / bnorm;
        if !rel.is_finite() {
            return Err(LinearSolveError::Breakdown { iterations: it });
        }
        if rel <= tol {
            return Ok(KrylovOutcome {
                iterations: it,
                relative_residual: rel,
            });
        }
        if omega == T::zero() {
            return Err(LinearSolveError::Breakdown { iterations: it });
        }
    }
    Err(LinearSolveError::NotConverged {
        iterations: max_iter,
        relative_residual: rel.to_f64_lossy(),
    })
}

/// Preconditioned conjugate gradients for symmetric positive definite systems.
pub fn pcg<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    precond: &Ilu0<T>,
    tol: T,
    max_iter: usize,
) -> Result<KrylovOutcome<T>, LinearSolveError> {
    let n = a.dim();
    let bnorm = norm2(b);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(KrylovOutcome {
            iterations: 0,
            relative_residual: T::zero(),
        });
    }
    let mut r = a.mul_vec(x);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z = r.clone();
    precond.apply_in_place(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![T::zero(); n];
    let mut rel = norm2(&r) / bnorm;
    for it in 0..=max_iter {
        if rel <= tol {
            return Ok(KrylovOutcome {
                iterations: it,
                relative_residual: rel,
            });
        }
        if it == max_iter {
            break;
        }
        a.mul_vec_into(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= T::zero() || !pq.is_finite() {
            return Err(LinearSolveError::Breakdown { iterations: it });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rel = norm2(&r) / bnorm;
        z.copy_from_slice(&r);
        precond.apply_in_place(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(LinearSolveError::NotConverged {
        iterations: max_iter,
        relative_residual: rel.to_f64_lossy(),
    })
}
