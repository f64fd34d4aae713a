//! `gdm`: generate meshes, run simulations, run convergence studies and
//! report discretisation quality.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gdm_core::mesh::FamilyTag;

#[derive(Parser, Debug)]
#[command(name = "gdm", version, about = "HMM gradient scheme for nonlinear convection-diffusion-reaction problems")]
struct Cli {
    /// key = value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a mesh and write it in the text format
    Mesh(MeshArgs),
    /// Run one simulation
    Run(RunArgs),
    /// Run a convergence study over mesh levels
    Study(StudyArgs),
    /// Report C_D, S_D and W_D
    Quality(QualityArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct MeshSource {
    /// triangular | hexagonal | distorted | nonconforming
    #[arg(long)]
    family: Option<FamilyTag>,
    #[arg(long)]
    level: Option<usize>,
    /// Mesh file instead of a generated family
    #[arg(long)]
    mesh: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct ModelArgs {
    /// gbf | heat
    #[arg(long)]
    model: Option<String>,
    /// GBF exponent
    #[arg(long)]
    p: Option<f64>,
    /// Diffusion coefficient of the heat model
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SolverArgs {
    /// direct | iterative | auto
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    picard_tol: Option<f64>,
    #[arg(long)]
    picard_max: Option<usize>,
    #[arg(long)]
    linear_tol: Option<f64>,
    /// Error norm: cell-center | quadrature
    #[arg(long)]
    norm: Option<String>,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[arg(long)]
    family: Option<FamilyTag>,
    #[arg(long)]
    level: Option<usize>,
    /// Output file, `-` for standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    source: MeshSource,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Output directory for trajectory.csv and dumps
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | none
    #[arg(long)]
    format: Option<String>,
    /// Also write every cell's local diffusion matrix
    #[arg(long)]
    dump_local_matrices: bool,
}

#[derive(Args, Debug)]
pub struct StudyArgs {
    #[arg(long)]
    family: Option<FamilyTag>,
    /// Comma-separated levels, default 1,2,3,4
    #[arg(long)]
    levels: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Comma-separated time steps, one per level
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Output directory for convergence.csv / convergence.md
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,md
    #[arg(long)]
    format: Option<String>,
    /// Run levels one after another
    #[arg(long)]
    serial: bool,
}

#[derive(Args, Debug)]
pub struct QualityArgs {
    #[command(flatten)]
    source: MeshSource,
    /// Comma-separated levels (instead of --level)
    #[arg(long)]
    levels: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    /// Check this time step against 2λ/(C_D+ε)
    #[arg(long)]
    dt: Option<f64>,
    /// csv | md
    #[arg(long)]
    format: Option<String>,
    /// Seed of the random discrete Poincaré check
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let file = match cli.config.as_deref().map(config::FileConfig::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Mesh(a) => commands::mesh(a, &file),
        Command::Run(a) => commands::run(a, &file),
        Command::Study(a) => commands::study(a, &file),
        Command::Quality(a) => commands::quality(a, &file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.code())
        }
    }
}
