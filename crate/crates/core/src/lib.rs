//! Hybrid mimetic mixed (HMM) gradient discretisation of nonlinear
//! convection–diffusion–reaction equations
//!
//! ```text
//! ∂_t c − λ Δc + A(g(c), ∇c) = f(c)   in Ω × (0, T)
//! ```
//!
//! on general polygonal meshes, with implicit Euler time stepping and a
//! Picard linearisation of each step.
//!
//! - [`mesh`]: polygonal meshes, generators for four mesh families, text I/O
//! - [`gdm`]: discrete unknowns, reconstructions, local matrices and fluxes
//! - [`models`]: problem data; the generalised Burgers–Fisher instance
//! - [`solver`]: step assembly, Picard iteration, time loop
//! - [`metrics`]: coercivity/consistency/conformity functionals, error norms,
//!   convergence rates
//! - [`study`]: convergence studies over mesh levels
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod geometry;
pub mod gdm;
pub mod linalg;
pub mod mesh;
pub mod metrics;
pub mod models;
pub mod scalar;
pub mod solver;
pub mod study;

pub use geometry::Vec2;
pub use scalar::Scalar;

pub type Point = geometry::Vec2<f64>;
pub type Mesh = mesh::PolytopalMesh<f64>;
pub type Dofs = gdm::DofVector<f64>;
pub type Model = models::ModelSpec<f64>;
pub type Discretisation<'m> = gdm::Hmm<'m, f64>;
pub type Config = solver::SolverConfig<f64>;
pub type Report = metrics::ConvergenceReport<f64>;

pub type Mesh32 = mesh::PolytopalMesh<f32>;
pub type Model32 = models::ModelSpec<f32>;
