//! Implicit Euler time stepping of the gradient scheme with a Picard
//! (frozen-coefficient) linearisation of every step.

mod assemble;
mod trajectory;

pub use assemble::{assemble_step, StepAssembler, StepSystem};
pub(crate) use assemble::eliminate_constraints;
pub use trajectory::{write_dofs, Snapshot, Trajectory};

use thiserror::Error;

use crate::gdm::{DofVector, Hmm};
use crate::linalg::{self, Ilu0, LinearSolveError, LinearSolveStats, LinearSolverKind};
use crate::models::ModelSpec;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("final time {t_final} is not a whole number of steps of size {dt}")]
    InvalidTimeGrid { dt: f64, t_final: f64 },
    #[error("vector has {found} entries, dof space has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Picard iteration failed at step {step} after {iterations} iterations (relative update {update:e})")]
    PicardDiverged {
        step: usize,
        iterations: usize,
        update: f64,
    },
    #[error("linear solve failed at step {step}: {source}")]
    LinearSolveFailed {
        step: usize,
        #[source]
        source: LinearSolveError,
    },
}

impl SolverError {
    /// Time step index the failure belongs to, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            SolverError::PicardDiverged { step, .. } | SolverError::LinearSolveFailed { step, .. } => {
                Some(*step)
            }
            _ => None,
        }
    }

    fn at_step(self, step: usize) -> Self {
        match self {
            SolverError::PicardDiverged {
                iterations, update, ..
            } => SolverError::PicardDiverged {
                step,
                iterations,
                update,
            },
            SolverError::LinearSolveFailed { source, .. } => {
                SolverError::LinearSolveFailed { step, source }
            }
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub dt: T,
    pub t_final: T,
    /// Relative Picard update (discrete gradient norm) below which a step is
    /// accepted.
    pub picard_tol: T,
    pub picard_max: usize,
    pub linear_tol: T,
    pub linear_solver: LinearSolverKind,
    /// Warn when `δt ≥ 2λ/(C_D + ε)` and `coercivity` is known.
    pub enforce_step_bound: bool,
    pub epsilon: T,
    /// `C_D` of the discretisation, if computed.
    pub coercivity: Option<T>,
    /// Record a snapshot every this many steps (the final state is always kept).
    pub snapshot_every: Option<usize>,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(dt: T, t_final: T) -> Self {
        Self {
            dt,
            t_final,
            picard_tol: T::lit(1e-10),
            picard_max: 50,
            linear_tol: T::lit(1e-12),
            linear_solver: LinearSolverKind::Auto,
            enforce_step_bound: true,
            epsilon: T::lit(1e-3),
            coercivity: None,
            snapshot_every: None,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::InvalidConfig(m.to_string()));
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return bad("dt must be positive");
        }
        if !(self.t_final >= self.dt) {
            return bad("final time must be at least dt");
        }
        if !(self.picard_tol > T::zero()) {
            return bad("picard_tol must be positive");
        }
        if self.picard_max == 0 {
            return bad("picard_max must be at least 1");
        }
        if !(self.linear_tol > T::zero()) {
            return bad("linear_tol must be positive");
        }
        if !(self.epsilon > T::zero()) {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    /// `N = round(T/δt)`, rejecting grids that miss `T` by more than `1e-9 T`.
    pub fn step_count(&self) -> Result<usize, SolverError> {
        self.validate()?;
        let ratio = (self.t_final / self.dt).round();
        let n = ratio.to_usize().unwrap_or(0);
        let miss = (ratio * self.dt - self.t_final).abs();
        if n == 0 || miss > T::lit(1e-9) * self.t_final {
            return Err(SolverError::InvalidTimeGrid {
                dt: self.dt.to_f64_lossy(),
                t_final: self.t_final.to_f64_lossy(),
            });
        }
        Ok(n)
    }

    /// `2λ/(C_D + ε)` when `C_D` is known.
    pub fn step_bound(&self, lambda: T) -> Option<T> {
        self.coercivity
            .map(|cd| T::lit(2.0) * lambda / (cd + self.epsilon))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PicardStats {
    /// Linear solves performed.
    pub iterations: usize,
    /// Relative update of the last iteration.
    pub last_update: f64,
    pub clamp_events: usize,
    pub linear_iterations: usize,
}

/// Solves one implicit step by fixed-point iteration from `u⁰ = prev`.
pub fn picard_step<T: Scalar>(
    assembler: &StepAssembler<'_, '_, T>,
    hmm: &Hmm<'_, T>,
    prev: &DofVector<T>,
    t_next: T,
    cfg: &SolverConfig<T>,
) -> Result<(DofVector<T>, PicardStats), SolverError> {
    let space = hmm.space();
    let mut frozen = prev.clone();
    let mut stats = PicardStats::default();
    let direct = cfg.linear_solver.is_direct_for(space.len());
    // the matrix changes little between Picard iterations: keep the first
    // incomplete factorisation unless it stops working
    let mut ilu: Option<Ilu0<T>> = None;
    for k in 1..=cfg.picard_max {
        let (system, clamps) = assembler.assemble(prev, &frozen, t_next)?;
        stats.clamp_events += clamps;
        let solved = if direct {
            solve_system(&system, None, cfg)
        } else {
            solve_reusing(&system, frozen.as_slice(), &mut ilu, cfg.linear_tol)
        };
        let (x, lin) = solved.map_err(|source| SolverError::LinearSolveFailed { step: 0, source })?;
        stats.linear_iterations += lin.iterations;
        let next = DofVector::from_vec(space, x).expect("solution length matches dof space");
        let update = hmm.gradient_norm(&next.difference(&frozen))
            / hmm.gradient_norm(&next).max(T::lit(1e-30));
        stats.iterations = k;
        stats.last_update = update.to_f64_lossy();
        frozen = next;
        if !update.is_finite() {
            break;
        }
        if update < cfg.picard_tol {
            return Ok((frozen, stats));
        }
    }
    Err(SolverError::PicardDiverged {
        step: 0,
        iterations: stats.iterations,
        update: stats.last_update,
    })
}

fn solve_reusing<T: Scalar>(
    system: &StepSystem<T>,
    guess: &[T],
    ilu: &mut Option<Ilu0<T>>,
    tol: T,
) -> Result<(Vec<T>, LinearSolveStats), LinearSolveError> {
    if let Some(pre) = ilu.as_ref() {
        let mut x = guess.to_vec();
        if let Ok(stats) = linalg::solve_preconditioned(&system.matrix, &system.rhs, &mut x, pre, tol) {
            return Ok((x, stats));
        }
    }
    let pre = ilu.insert(Ilu0::new(&system.matrix)?);
    let mut x = guess.to_vec();
    let stats = linalg::solve_preconditioned(&system.matrix, &system.rhs, &mut x, pre, tol)?;
    Ok((x, stats))
}

pub fn solve_system<T: Scalar>(
    system: &StepSystem<T>,
    guess: Option<&[T]>,
    cfg: &SolverConfig<T>,
) -> Result<(Vec<T>, LinearSolveStats), LinearSolveError> {
    linalg::solve(
        &system.matrix,
        &system.rhs,
        guess,
        cfg.linear_solver,
        cfg.linear_tol,
    )
}

/// Initial state `J_D(c₀)` with boundary faces set to the trace at `t = 0`.
pub fn initial_state<T: Scalar>(hmm: &Hmm<'_, T>, model: &ModelSpec<T>) -> DofVector<T> {
    let mut c0 = hmm.interpolate(|x| (model.initial)(x));
    let mesh = hmm.mesh();
    for &f in hmm.space().boundary_faces() {
        *c0.face_mut(f) = (model.boundary_trace)(mesh.faces[f].midpoint, T::zero());
    }
    c0
}

/// Runs the full time loop from `J_D(c₀)` to `T`.
pub fn run<T: Scalar>(
    hmm: &Hmm<'_, T>,
    model: &ModelSpec<T>,
    cfg: &SolverConfig<T>,
) -> Result<Trajectory<T>, SolverError> {
    let n_steps = cfg.step_count()?;
    let mut step_bound_violated = false;
    if cfg.enforce_step_bound {
        if let Some(bound) = cfg.step_bound(model.lambda) {
            if cfg.dt >= bound {
                step_bound_violated = true;
                log::warn!(
                    "time step {} is not below 2λ/(C_D+ε) = {}; uniqueness of the discrete solution is not guaranteed",
                    cfg.dt,
                    bound
                );
            }
        }
    }
    let assembler = StepAssembler::new(hmm, model, cfg.dt);
    let mut state = initial_state(hmm, model);
    let mut traj = Trajectory::new(cfg.dt, step_bound_violated);
    traj.record_snapshot(0, T::zero(), &state);
    for m in 1..=n_steps {
        let t_next = T::from_usize_lossy(m) * cfg.dt;
        let (next, stats) =
            picard_step(&assembler, hmm, &state, t_next, cfg).map_err(|e| e.at_step(m))?;
        state = next;
        traj.record_step(stats);
        let keep = cfg.snapshot_every.is_some_and(|every| every > 0 && m % every == 0);
        if keep || m == n_steps {
            traj.record_snapshot(m, t_next, &state);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests;
