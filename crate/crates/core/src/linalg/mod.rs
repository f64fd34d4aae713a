//! Sparse linear algebra used by the time stepper and the quality metrics.

mod csr;
mod ilu;
mod krylov;
mod skyline;

pub use csr::{dot, norm2, residual_norm, CsrMatrix};
pub use ilu::Ilu0;
pub use krylov::{bicgstab, pcg, KrylovOutcome};
pub use skyline::{reverse_cuthill_mckee, SkylineLu};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinearSolveError {
    #[error("zero or non-finite pivot at row {row}")]
    ZeroPivot { row: usize },
    #[error("Krylov breakdown after {iterations} iterations")]
    Breakdown { iterations: usize },
    #[error("no convergence after {iterations} iterations (relative residual {relative_residual:e})")]
    NotConverged {
        iterations: usize,
        relative_residual: f64,
    },
    #[error("direct factorisation requires a structurally symmetric pattern")]
    UnsymmetricPattern,
    #[error("right-hand side has length {rhs}, matrix has dimension {dim}")]
    DimensionMismatch { rhs: usize, dim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LinearSolverKind {
    /// Envelope LU after reverse Cuthill–McKee reordering.
    Direct,
    /// ILU(0)-preconditioned BiCGSTAB, warm-started.
    Iterative,
    /// Direct up to `AUTO_DIRECT_LIMIT` unknowns, iterative beyond.
    #[default]
    Auto,
}

pub const AUTO_DIRECT_LIMIT: usize = 500;

impl LinearSolverKind {
    /// Whether a system of `n` unknowns goes to the direct path.
    pub fn is_direct_for(self, n: usize) -> bool {
        match self {
            Self::Direct => true,
            Self::Iterative => false,
            Self::Auto => n <= AUTO_DIRECT_LIMIT,
        }
    }
}

impl std::str::FromStr for LinearSolverKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Self::Direct),
            "iterative" | "krylov" => Ok(Self::Iterative),
            "auto" => Ok(Self::Auto),
            other => Err(format!("unknown linear solver '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearSolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
    pub direct: bool,
}

/// Solves `A x = b` to `‖b − A x‖ ≤ tol ‖b‖`. `guess` seeds the iterative path.
pub fn solve<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    guess: Option<&[T]>,
    kind: LinearSolverKind,
    tol: T,
) -> Result<(Vec<T>, LinearSolveStats), LinearSolveError> {
    let n = a.dim();
    if b.len() != n || guess.is_some_and(|g| g.len() != n) {
        return Err(LinearSolveError::DimensionMismatch { rhs: b.len(), dim: n });
    }
    if kind.is_direct_for(n) {
        solve_direct(a, b, tol)
    } else {
        let mut x = guess.map_or_else(|| vec![T::zero(); n], <[T]>::to_vec);
        let ilu = Ilu0::new(a)?;
        let stats = solve_preconditioned(a, b, &mut x, &ilu, tol)?;
        Ok((x, stats))
    }
}

/// BiCGSTAB with a caller-owned preconditioner, which may come from a
/// nearby matrix. `x` holds the initial guess on entry.
pub fn solve_preconditioned<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    ilu: &Ilu0<T>,
    tol: T,
) -> Result<LinearSolveStats, LinearSolveError> {
    let n = a.dim();
    if b.len() != n || x.len() != n {
        return Err(LinearSolveError::DimensionMismatch { rhs: b.len(), dim: n });
    }
    let max_iter = 200 + n.min(20_000);
    let out = bicgstab(a, b, x, ilu, tol, max_iter)?;
    Ok(LinearSolveStats {
        iterations: out.iterations,
        relative_residual: out.relative_residual.to_f64_lossy(),
        direct: false,
    })
}

fn solve_direct<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    tol: T,
) -> Result<(Vec<T>, LinearSolveStats), LinearSolveError> {
    let lu = SkylineLu::factor(a)?;
    let bnorm = norm2(b);
    let mut x = lu.solve(b);
    let mut rel = relative(residual_norm(a, &x, b), bnorm);
    let mut refinements = 0;
    while rel > tol && refinements < 3 {
        let ax = a.mul_vec(&x);
        let r: Vec<T> = b.iter().zip(&ax).map(|(&p, &q)| p - q).collect();
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(xi, &d)| *xi += d);
        rel = relative(residual_norm(a, &x, b), bnorm);
        refinements += 1;
    }
    if !(rel <= tol) {
        return Err(LinearSolveError::NotConverged {
            iterations: refinements,
            relative_residual: rel.to_f64_lossy(),
        });
    }
    Ok((
        x,
        LinearSolveStats {
            iterations: refinements,
            relative_residual: rel.to_f64_lossy(),
            direct: true,
        },
    ))
}

fn relative<T: Scalar>(r: T, bnorm: T) -> T {
    if bnorm == T::zero() {
        r
    } else {
        r / bnorm
    }
}
