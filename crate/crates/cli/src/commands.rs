use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gdm_core::gdm::{DofVector, Hmm};
use gdm_core::linalg::LinearSolverKind;
use gdm_core::mesh::{generate, read_mesh, write_mesh, FamilyTag, MeshFamily};
use gdm_core::metrics::{self, ConvergenceReport, ErrorNorm};
use gdm_core::models::{make_gbf, make_heat};
use gdm_core::solver::{self, write_dofs, SolverConfig};
use gdm_core::study::{run_study, StudyConfig, StudyError};
use gdm_core::{Config, Mesh, Model};

use crate::config::{pick, pick_list, FileConfig};
use crate::{MeshArgs, MeshSource, ModelArgs, QualityArgs, RunArgs, SolverArgs, StudyArgs};

/// Usage/configuration problems exit with 2, runtime failures with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e:#}"),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Runtime(e.into())
}

fn require<T>(v: Option<T>, what: &str) -> CliResult<T> {
    v.ok_or_else(|| usage(anyhow!("missing --{what} (flag or config key)")))
}

fn load_mesh(src: &MeshSource, file: &FileConfig, level: Option<usize>) -> CliResult<(Mesh, String)> {
    let path: Option<PathBuf> = pick(src.mesh.clone(), file, "mesh").map_err(usage)?;
    if let Some(path) = path {
        let f = fs::File::open(&path)
            .with_context(|| format!("opening {}", path.display()))
            .map_err(runtime)?;
        let mesh = read_mesh(io::BufReader::new(f))
            .with_context(|| format!("reading {}", path.display()))
            .map_err(runtime)?;
        return Ok((mesh, path.display().to_string()));
    }
    let family: FamilyTag = require(pick(src.family, file, "family").map_err(usage)?, "family")?;
    let level = match level {
        Some(l) => l,
        None => pick(src.level, file, "level").map_err(usage)?.unwrap_or(1),
    };
    let mesh = generate(MeshFamily::new(family, level)).map_err(runtime)?;
    Ok((mesh, format!("{family} level {level}")))
}

fn build_model(args: &ModelArgs, file: &FileConfig) -> CliResult<Model> {
    let name: String = pick(args.model.clone(), file, "model")
        .map_err(usage)?
        .unwrap_or_else(|| "gbf".into());
    match name.to_ascii_lowercase().as_str() {
        "gbf" | "burgers-fisher" => {
            let p = pick(args.p, file, "p").map_err(usage)?.unwrap_or(2.0);
            make_gbf(p).map_err(usage)
        }
        "heat" => {
            let lambda = pick(args.lambda, file, "lambda").map_err(usage)?.unwrap_or(1.0);
            make_heat(lambda).map_err(usage)
        }
        other => Err(usage(anyhow!("unknown model '{other}' (expected gbf or heat)"))),
    }
}

fn solver_config(args: &SolverArgs, file: &FileConfig, dt: f64, t_final: f64) -> CliResult<Config> {
    let mut cfg = SolverConfig::new(dt, t_final);
    if let Some(v) = pick(args.picard_tol, file, "picard_tol").map_err(usage)? {
        cfg.picard_tol = v;
    }
    if let Some(v) = pick(args.picard_max, file, "picard_max").map_err(usage)? {
        cfg.picard_max = v;
    }
    if let Some(v) = pick(args.linear_tol, file, "linear_tol").map_err(usage)? {
        cfg.linear_tol = v;
    }
    let kind: Option<String> = pick(args.solver.clone(), file, "solver").map_err(usage)?;
    if let Some(k) = kind {
        cfg.linear_solver = k.parse::<LinearSolverKind>().map_err(|e| usage(anyhow!(e)))?;
    }
    Ok(cfg)
}

fn error_norm(args: &SolverArgs, file: &FileConfig) -> CliResult<ErrorNorm> {
    let s: Option<String> = pick(args.norm.clone(), file, "norm").map_err(usage)?;
    s.map_or(Ok(ErrorNorm::CellCenter), |s| s.parse().map_err(|e: String| usage(anyhow!(e))))
}

fn formats(flag: Option<&str>, file: &FileConfig, default: &[&str], allowed: &[&str]) -> CliResult<Vec<String>> {
    let list: Vec<String> = pick_list(flag, file, "format")
        .map_err(usage)?
        .unwrap_or_else(|| default.iter().map(|s| s.to_string()).collect());
    for f in &list {
        if !allowed.contains(&f.as_str()) {
            return Err(usage(anyhow!("unsupported format '{f}' (expected one of {})", allowed.join(", "))));
        }
    }
    Ok(list)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime)
}

fn out_dir(path: Option<PathBuf>) -> CliResult<Option<PathBuf>> {
    if let Some(dir) = &path {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(runtime)?;
    }
    Ok(path)
}

pub fn mesh(args: MeshArgs, file: &FileConfig) -> CliResult<()> {
    let family: FamilyTag = require(pick(args.family, file, "family").map_err(usage)?, "family")?;
    let level = pick(args.level, file, "level").map_err(usage)?.unwrap_or(1);
    let out: PathBuf = pick(args.out, file, "out")
        .map_err(usage)?
        .unwrap_or_else(|| PathBuf::from("-"));
    let mesh: Mesh = generate(MeshFamily::new(family, level)).map_err(runtime)?;
    let summary = format!(
        "{family} level {level}: h={:.7} cells={} faces={} boundary_faces={}",
        mesh.h,
        mesh.n_cells(),
        mesh.n_faces(),
        mesh.n_boundary_faces()
    );
    if out.as_os_str() == "-" {
        let stdout = io::stdout();
        write_mesh(&mesh, stdout.lock()).map_err(runtime)?;
        eprintln!("{summary}");
    } else {
        let f = fs::File::create(&out)
            .with_context(|| format!("creating {}", out.display()))
            .map_err(runtime)?;
        write_mesh(&mesh, io::BufWriter::new(f)).map_err(runtime)?;
        println!("{summary}");
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn local_matrices_text(hmm: &Hmm<'_, f64>) -> String {
    let mut s = String::new();
    for k in 0..hmm.mesh().n_cells() {
        let a = hmm.local_diffusion_matrix(k);
        s.push_str(&format!("cell {k} size {}\n", a.size));
        for i in 0..a.size {
            let row: Vec<String> = (0..a.size).map(|j| format!("{:.17e}", a.get(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn run(args: RunArgs, file: &FileConfig) -> CliResult<()> {
    let model = build_model(&args.model, file)?;
    let dt: f64 = require(pick(args.dt, file, "dt").map_err(usage)?, "dt")?;
    let t_final: f64 = pick(args.t_final, file, "T").map_err(usage)?.unwrap_or(1.0);
    let cfg = solver_config(&args.solver, file, dt, t_final)?;
    let n_steps = cfg.step_count().map_err(usage)?;
    let norm = error_norm(&args.solver, file)?;
    let fmts = formats(args.format.as_deref(), file, &["csv"], &["csv", "none"])?;
    let out = out_dir(pick(args.out, file, "out").map_err(usage)?)?;
    let (mesh, label) = load_mesh(&args.source, file, None)?;
    let hmm = Hmm::new(&mesh);
    println!(
        "{} on {label}: h={:.7} dofs={} dt={dt} steps={n_steps}",
        model.name,
        mesh.h,
        hmm.space().len()
    );
    if args.dump_local_matrices {
        let text = local_matrices_text(&hmm);
        match &out {
            Some(dir) => write_file(&dir.join("local_matrices.txt"), &text)?,
            None => print!("{text}"),
        }
    }
    let traj = solver::run(&hmm, &model, &cfg).map_err(runtime)?;
    println!(
        "completed {} steps: max picard iterations {}, clamp events {}",
        traj.n_steps(),
        traj.max_picard_iters(),
        traj.total_clamp_events()
    );
    if let Some(dir) = &out {
        if fmts.iter().any(|f| f == "csv") {
            write_file(&dir.join("trajectory.csv"), &traj.csv_string())?;
        }
        let mut dump = Vec::new();
        write_dofs(traj.last(), &mut dump).map_err(runtime)?;
        write_file(&dir.join("final_state.txt"), &String::from_utf8_lossy(&dump))?;
    }
    let last = traj.last();
    if let Some(e) = metrics::solution_errors(&hmm, &model, &last.state, last.time, norm) {
        println!(
            "errors at T={}: rel_c={:.7e} rel_grad={:.7e} abs_c={:.7e} abs_grad={:.7e} ({norm})",
            last.time, e.solution.relative, e.gradient.relative, e.solution.absolute, e.gradient.absolute
        );
    }
    Ok(())
}

fn write_report(report: &ConvergenceReport<f64>, out: Option<&Path>, fmts: &[String]) -> CliResult<()> {
    if let Some(dir) = out {
        for f in fmts {
            match f.as_str() {
                "csv" => write_file(&dir.join("convergence.csv"), &report.to_csv())?,
                "md" => write_file(&dir.join("convergence.md"), &report.to_markdown())?,
                _ => {}
            }
        }
    }
    Ok(())
}

pub fn study(args: StudyArgs, file: &FileConfig) -> CliResult<()> {
    let model = build_model(&args.model, file)?;
    let family: FamilyTag = require(pick(args.family, file, "family").map_err(usage)?, "family")?;
    let levels: Vec<usize> = pick_list(args.levels.as_deref(), file, "levels")
        .map_err(usage)?
        .unwrap_or_else(|| vec![1, 2, 3, 4]);
    let dts: Vec<f64> = match pick_list(args.dt.as_deref(), file, "dt").map_err(usage)? {
        Some(d) => d,
        None => levels
            .iter()
            .map(|&l| 0.01 / 2f64.powi(l.saturating_sub(1) as i32))
            .collect(),
    };
    let t_final: f64 = pick(args.t_final, file, "T").map_err(usage)?.unwrap_or(1.0);
    let serial = args.serial || pick::<bool>(None, file, "serial").map_err(usage)?.unwrap_or(false);
    let fmts = formats(args.format.as_deref(), file, &["csv", "md"], &["csv", "md"])?;
    let out = out_dir(pick(args.out, file, "out").map_err(usage)?)?;

    let mut cfg = StudyConfig::standard(model, family);
    cfg.levels = levels;
    cfg.dts = dts;
    cfg.t_final = t_final;
    cfg.solver = solver_config(&args.solver, file, cfg.dts.first().copied().unwrap_or(0.01), t_final)?;
    cfg.norm = error_norm(&args.solver, file)?;
    cfg.parallel = !serial;
    cfg.validate().map_err(|e| usage(anyhow!("{e}")))?;

    match run_study(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.report.to_markdown());
            for l in &outcome.levels {
                log::info!(
                    "level {}: {} cells, {} steps, max picard {}, {:.1}s",
                    l.level,
                    l.n_cells,
                    l.steps,
                    l.max_picard_iters,
                    l.elapsed.as_secs_f64()
                );
            }
            write_report(&outcome.report, out.as_deref(), &fmts)
        }
        Err(e) => {
            let partial = partial_report(&cfg, &e);
            if let Some(report) = partial {
                print!("{}", report.to_markdown());
                write_report(&report, out.as_deref(), &fmts)?;
            }
            Err(runtime(anyhow!("{e}")))
        }
    }
}

fn partial_report(cfg: &StudyConfig<f64>, e: &StudyError<f64>) -> Option<ConvergenceReport<f64>> {
    let done = e.completed();
    if done.is_empty() {
        return None;
    }
    let entries: Vec<(f64, f64, f64, f64)> = done
        .iter()
        .map(|r| (r.h, r.dt, r.errors.solution.relative, r.errors.gradient.relative))
        .collect();
    ConvergenceReport::new(cfg.model.name.clone(), cfg.family.name(), &entries).ok()
}

/// Largest `‖Π_D u‖ / ‖∇_D u‖` over random homogeneous vectors.
fn poincare_sample(hmm: &Hmm<'_, f64>, seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = hmm.space().free_dofs();
    let mut worst = 0f64;
    for _ in 0..samples {
        let mut u = DofVector::zeros(hmm.space());
        for &d in &free {
            u[d] = rng.gen_range(-1.0..1.0);
        }
        worst = worst.max(hmm.reconstruction_norm(&u) / hmm.gradient_norm(&u));
    }
    worst
}

pub fn quality(args: QualityArgs, file: &FileConfig) -> CliResult<()> {
    let model = build_model(&args.model, file)?;
    let fmts = formats(args.format.as_deref(), file, &["csv"], &["csv", "md"])?;
    let fmt = fmts.first().cloned().unwrap_or_else(|| "csv".into());
    let seed = pick(args.seed, file, "seed").map_err(usage)?.unwrap_or(0);
    let dt: Option<f64> = pick(args.dt, file, "dt").map_err(usage)?;
    let levels: Option<Vec<usize>> = pick_list(args.levels.as_deref(), file, "levels").map_err(usage)?;
    let level_list: Vec<Option<usize>> = match levels {
        Some(ls) if args.source.mesh.is_none() => ls.into_iter().map(Some).collect(),
        _ => vec![None],
    };
    let out = pick::<PathBuf>(args.out, file, "out").map_err(usage)?;

    let mut text = String::new();
    if fmt == "md" {
        text.push_str("| mesh | h | C_D | S_D | W_D | poincare_max_ratio |\n|---|---|---|---|---|---|\n");
    } else {
        text.push_str("mesh,h,C_D,S_D,W_D,poincare_max_ratio\n");
    }
    for level in level_list {
        let (mesh, label) = load_mesh(&args.source, file, level)?;
        let hmm = Hmm::new(&mesh);
        let q = metrics::quality_report(&hmm).map_err(runtime)?;
        let sd = q.s_d.values().next().copied().unwrap_or(0.0);
        let wd = q.w_d.values().next().copied().unwrap_or(0.0);
        let ratio = poincare_sample(&hmm, seed, 100);
        let row = [
            format!("{:.7}", q.h),
            format!("{:.7e}", q.c_d),
            format!("{sd:.7e}"),
            format!("{wd:.7e}"),
            format!("{ratio:.7e}"),
        ];
        if fmt == "md" {
            text.push_str(&format!("| {label} | {} |\n", row.join(" | ")));
        } else {
            text.push_str(&format!("{label},{}\n", row.join(",")));
        }
        if let Some(dt) = dt {
            let mut cfg = SolverConfig::new(dt, dt);
            cfg.coercivity = Some(q.c_d);
            let bound = cfg.step_bound(model.lambda).expect("coercivity set");
            if dt >= bound {
                eprintln!(
                    "warning: {label}: dt={dt} is not below 2λ/(C_D+ε)={bound:.6} (C_D={:.6}); the implicit scheme may have several solutions",
                    q.c_d
                );
            }
        }
    }
    print!("{text}");
    if let Some(path) = out {
        if path.as_os_str() != "-" {
            write_file(&path, &text)?;
        }
    }
    io::stdout().flush().map_err(runtime)?;
    Ok(())
}
