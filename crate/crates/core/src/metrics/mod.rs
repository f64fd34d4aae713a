//! Quality functionals of the discretisation (`C_D`, `S_D`, `W_D`), error
//! norms against an exact solution, and convergence rates.

mod norms;
mod quadrature;
mod quality;
mod report;

pub use norms::{
    l2_error_gradient, l2_error_solution, l2_norm, solution_errors, ErrorNorm, ErrorPair,
    SolutionErrors,
};
pub use quadrature::{half_diamond_points, integrate_cell, triangle_points};
pub use quality::{
    coercivity_constant, consistency_defect, gradient_gram, interpolant_pd, limit_conformity_defect,
    pd_objective, probe_bubble, probe_curl_bubble, quality_report, CoercivityEstimate, QualityReport,
    VectorProbe, ScalarProbe,
};
pub use report::{rates, ConvergenceReport, ConvergenceRow};

use thiserror::Error;

use crate::linalg::LinearSolveError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("generalised eigenvalue iteration did not converge: {iterations} iterations, residual {residual:e}")]
    EigSolveFailed { iterations: usize, residual: f64 },
    #[error("linear solve failed: {0}")]
    LinearSolveFailed(#[from] LinearSolveError),
    #[error("error {index} is not positive ({value})")]
    NonPositiveError { index: usize, value: f64 },
    #[error("mesh sizes must be strictly decreasing (entry {index})")]
    NonDecreasingH { index: usize },
    #[error("{errors} errors for {sizes} mesh sizes; need equal lengths of at least 2")]
    LengthMismatch { errors: usize, sizes: usize },
}
