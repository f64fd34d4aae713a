//! Convergence studies: one simulation per mesh level, errors at the final
//! time, observed rates.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::gdm::Hmm;
use crate::mesh::{generate, FamilyTag, MeshError, MeshFamily};
use crate::metrics::{self, ConvergenceReport, ErrorNorm, MetricsError, SolutionErrors};
use crate::models::ModelSpec;
use crate::scalar::Scalar;
use crate::solver::{self, SolverConfig, SolverError};

/// Time steps of the four-level schedule.
pub const DEFAULT_DT_SCHEDULE: [f64; 4] = [0.01, 0.005, 0.0025, 0.00125];

#[derive(Clone, Debug)]
pub struct StudyConfig<T> {
    pub model: ModelSpec<T>,
    pub family: FamilyTag,
    pub levels: Vec<usize>,
    /// One time step per level.
    pub dts: Vec<T>,
    pub t_final: T,
    /// Tolerances and linear solver; `dt` and `t_final` are overridden per level.
    pub solver: SolverConfig<T>,
    pub norm: ErrorNorm,
    /// Run levels concurrently.
    pub parallel: bool,
}

impl<T: Scalar> StudyConfig<T> {
    /// Levels 1–4 with the default time-step schedule, `T = 1`.
    pub fn standard(model: ModelSpec<T>, family: FamilyTag) -> Self {
        let t_final = T::one();
        Self {
            model,
            family,
            levels: vec![1, 2, 3, 4],
            dts: DEFAULT_DT_SCHEDULE.iter().map(|&d| T::lit(d)).collect(),
            t_final,
            solver: SolverConfig::new(T::lit(DEFAULT_DT_SCHEDULE[0]), t_final),
            norm: ErrorNorm::CellCenter,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<(), StudyError<T>> {
        let bad = |m: String| Err(StudyError::InvalidConfig(m));
        if self.levels.is_empty() {
            return bad("at least one level is required".into());
        }
        if self.levels.len() != self.dts.len() {
            return bad(format!(
                "{} levels but {} time steps",
                self.levels.len(),
                self.dts.len()
            ));
        }
        if self.levels.contains(&0) {
            return bad("levels start at 1".into());
        }
        if self.model.exact.is_none() {
            return bad(format!("model '{}' has no exact solution", self.model.name));
        }
        for &dt in &self.dts {
            self.level_solver(dt)
                .step_count()
                .map_err(|e| StudyError::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }

    fn level_solver(&self, dt: T) -> SolverConfig<T> {
        let mut cfg = self.solver.clone();
        cfg.dt = dt;
        cfg.t_final = self.t_final;
        cfg
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelResult<T> {
    pub level: usize,
    pub h: T,
    pub dt: T,
    pub n_cells: usize,
    pub n_dofs: usize,
    pub errors: SolutionErrors<T>,
    pub steps: usize,
    pub max_picard_iters: usize,
    pub clamp_events: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct StudyOutcome<T> {
    pub levels: Vec<LevelResult<T>>,
    pub report: ConvergenceReport<T>,
}

#[derive(Debug, Error)]
pub enum StudyError<T> {
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
    #[error("level {level}: {source}")]
    Mesh {
        level: usize,
        #[source]
        source: MeshError,
        completed: Vec<LevelResult<T>>,
    },
    #[error("level {level}: {source}")]
    Solver {
        level: usize,
        #[source]
        source: SolverError,
        completed: Vec<LevelResult<T>>,
    },
    #[error("report: {0}")]
    Report(#[from] MetricsError),
}

impl<T> StudyError<T> {
    /// Levels that finished before the failure.
    pub fn completed(&self) -> &[LevelResult<T>] {
        match self {
            StudyError::Mesh { completed, .. } | StudyError::Solver { completed, .. } => completed,
            _ => &[],
        }
    }
}

enum LevelFailure {
    Mesh(MeshError),
    Solver(SolverError),
}

fn run_level<T: Scalar>(
    cfg: &StudyConfig<T>,
    level: usize,
    dt: T,
) -> Result<LevelResult<T>, LevelFailure> {
    let start = Instant::now();
    let mesh = generate::<T>(MeshFamily::new(cfg.family, level)).map_err(LevelFailure::Mesh)?;
    let hmm = Hmm::new(&mesh);
    let scfg = cfg.level_solver(dt);
    let traj = solver::run(&hmm, &cfg.model, &scfg).map_err(LevelFailure::Solver)?;
    let last = traj.last();
    let errors = metrics::solution_errors(&hmm, &cfg.model, &last.state, last.time, cfg.norm)
        .expect("validated: model has an exact solution");
    log::info!(
        "{} level {level}: h={} dt={} err_c={:e} err_grad={:e}",
        cfg.family,
        mesh.h,
        dt,
        errors.solution.relative,
        errors.gradient.relative
    );
    Ok(LevelResult {
        level,
        h: mesh.h,
        dt,
        n_cells: mesh.n_cells(),
        n_dofs: hmm.space().len(),
        errors,
        steps: traj.n_steps(),
        max_picard_iters: traj.max_picard_iters(),
        clamp_events: traj.total_clamp_events(),
        elapsed: start.elapsed(),
    })
}

/// Runs every level and assembles the report in level order.
pub fn run_study<T: Scalar>(cfg: &StudyConfig<T>) -> Result<StudyOutcome<T>, StudyError<T>> {
    cfg.validate()?;
    let jobs: Vec<(usize, T)> = cfg.levels.iter().copied().zip(cfg.dts.iter().copied()).collect();
    let results: Vec<Result<LevelResult<T>, LevelFailure>> = if cfg.parallel {
        jobs.par_iter().map(|&(l, dt)| run_level(cfg, l, dt)).collect()
    } else {
        jobs.iter().map(|&(l, dt)| run_level(cfg, l, dt)).collect()
    };
    let mut done = Vec::new();
    let mut failure = None;
    for ((level, _), r) in jobs.iter().zip(results) {
        match r {
            Ok(res) => done.push(res),
            Err(e) if failure.is_none() => failure = Some((*level, e)),
            Err(_) => {}
        }
    }
    if let Some((level, e)) = failure {
        return Err(match e {
            LevelFailure::Mesh(source) => StudyError::Mesh {
                level,
                source,
                completed: done,
            },
            LevelFailure::Solver(source) => StudyError::Solver {
                level,
                source,
                completed: done,
            },
        });
    }
    let entries: Vec<(T, T, T, T)> = done
        .iter()
        .map(|r| (r.h, r.dt, r.errors.solution.relative, r.errors.gradient.relative))
        .collect();
    let report = ConvergenceReport::new(cfg.model.name.clone(), cfg.family.name(), &entries)?;
    Ok(StudyOutcome {
        levels: done,
        report,
    })
}
