//! Problem data `(λ, A, g, f)` with initial and boundary data, and the
//! generalised Burgers–Fisher instance with its travelling-wave solution.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::Vec2;
use crate::scalar::Scalar;

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
/// `A(u, q)`.
pub type ConvectionFn<T> = Arc<dyn Fn(T, Vec2<T>) -> T + Send + Sync>;
pub type SpaceTimeFn<T> = Arc<dyn Fn(Vec2<T>, T) -> T + Send + Sync>;
pub type SpaceTimeGradFn<T> = Arc<dyn Fn(Vec2<T>, T) -> Vec2<T> + Send + Sync>;
pub type SpaceFn<T> = Arc<dyn Fn(Vec2<T>) -> T + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("diffusion coefficient must be positive, got {0}")]
    InvalidLambda(f64),
    #[error("exponent p must be positive, got {0}")]
    InvalidExponent(f64),
}

#[derive(Clone)]
pub struct ExactSolution<T> {
    pub value: SpaceTimeFn<T>,
    pub gradient: SpaceTimeGradFn<T>,
}

/// Data of `∂_t c − λΔc + A(g(c), ∇c) = f(c)`.
#[derive(Clone)]
pub struct ModelSpec<T> {
    pub name: String,
    pub lambda: T,
    pub convection: ConvectionFn<T>,
    pub g: ScalarFn<T>,
    pub f: ScalarFn<T>,
    /// `(ℓ₁, ℓ₂, ℓ₃)`; informational only.
    pub lipschitz: Option<[T; 3]>,
    pub exact: Option<ExactSolution<T>>,
    pub boundary_trace: SpaceTimeFn<T>,
    pub initial: SpaceFn<T>,
    /// Arguments of `g` and `f` below this bound are clamped to it (the
    /// solver counts such events). Needed when `g`, `f` involve fractional
    /// powers.
    pub clamp_below: Option<T>,
}

impl<T> fmt::Debug for ModelSpec<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelSpec")
            .field("name", &self.name)
            .field("lambda", &self.lambda)
            .field("has_exact", &self.exact.is_some())
            .field("clamp_below", &self.clamp_below)
            .finish_non_exhaustive()
    }
}

/// Initial/boundary data handed to [`make_custom`].
#[derive(Clone)]
pub struct ModelData<T> {
    pub initial: SpaceFn<T>,
    pub boundary_trace: SpaceTimeFn<T>,
    pub exact: Option<ExactSolution<T>>,
    pub lipschitz: Option<[T; 3]>,
    pub clamp_below: Option<T>,
}

impl<T: Scalar> ModelData<T> {
    /// Zero initial and boundary data.
    pub fn homogeneous() -> Self {
        Self {
            initial: Arc::new(|_| T::zero()),
            boundary_trace: Arc::new(|_, _| T::zero()),
            exact: None,
            lipschitz: None,
            clamp_below: None,
        }
    }

    /// Initial and boundary data taken from an exact solution.
    pub fn from_exact(exact: ExactSolution<T>) -> Self {
        let v0 = exact.value.clone();
        let vb = exact.value.clone();
        Self {
            initial: Arc::new(move |x| v0(x, T::zero())),
            boundary_trace: Arc::new(move |x, t| vb(x, t)),
            exact: Some(exact),
            lipschitz: None,
            clamp_below: None,
        }
    }
}

impl<T: Scalar> ModelSpec<T> {
    /// Clamped argument for `g`/`f`, plus whether clamping happened.
    pub fn nonlinearity_argument(&self, c: T) -> (T, bool) {
        match self.clamp_below {
            Some(lo) if c < lo => (lo, true),
            _ => (c, false),
        }
    }

    /// Splits `A(u, ·)` at fixed `u` into `A(u, 0)` and the coefficient
    /// vector of its linear part. Exact when `A` is affine in its second
    /// argument, which the Picard linearisation requires.
    pub fn convection_coefficients(&self, u: T) -> (T, Vec2<T>) {
        let a0 = (self.convection)(u, Vec2::zero());
        let ax = (self.convection)(u, Vec2::new(T::one(), T::zero())) - a0;
        let ay = (self.convection)(u, Vec2::new(T::zero(), T::one())) - a0;
        (a0, Vec2::new(ax, ay))
    }

    /// `∂_t c − λΔc + A(g(c), ∇c) − f(c)` for a smooth `c` given its value,
    /// gradient, time derivative and Laplacian at one point.
    pub fn residual(&self, value: T, gradient: Vec2<T>, dt: T, laplacian: T) -> T {
        dt - self.lambda * laplacian + (self.convection)((self.g)(value), gradient) - (self.f)(value)
    }
}

/// Generalised Burgers–Fisher travelling wave
/// `[½ + ½ tanh(−p/(2(p+1)) (x + y − (4 + 2(p+1)²)/(2(p+1)) t))]^{1/p}`.
pub fn gbf_exact<T: Scalar>(x: T, y: T, t: T, p: T) -> T {
    let base = gbf_base(x, y, t, p);
    base.powf(T::one() / p)
}

fn gbf_base<T: Scalar>(x: T, y: T, t: T, p: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let p1 = p + one;
    let slope = -two * p / (four * p1);
    let speed = (four + two * p1 * p1) / (two * p1);
    let z = slope * (x + y - speed * t);
    T::lit(0.5) + T::lit(0.5) * z.tanh()
}

/// Spatial gradient of [`gbf_exact`]; both components coincide.
pub fn gbf_exact_gradient<T: Scalar>(x: T, y: T, t: T, p: T) -> Vec2<T> {
    // d/dx base^{1/p} = (1/p) base^{1/p} (1/base) * 2 base (1 − base) * slope
    //                 = −c (1 − base) / (p + 1)
    let base = gbf_base(x, y, t, p);
    let c = base.powf(T::one() / p);
    let d = -c * (T::one() - base) / (p + T::one());
    Vec2::new(d, d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbfParams<T> {
    pub p: T,
}

impl<T: Scalar> GbfParams<T> {
    pub fn new(p: T) -> Result<Self, ModelError> {
        if p > T::zero() && p.is_finite() {
            Ok(Self { p })
        } else {
            Err(ModelError::InvalidExponent(p.to_f64_lossy()))
        }
    }
}

/// GBF model on the unit square: `A(u,q) = u (q_x + q_y)`, `g(c) = c^p`,
/// `f(c) = c (1 − c^p)`, `λ = 1`, data from the travelling wave.
pub fn make_gbf<T: Scalar>(p: T) -> Result<ModelSpec<T>, ModelError> {
    let GbfParams { p } = GbfParams::new(p)?;
    let exact = ExactSolution {
        value: Arc::new(move |x: Vec2<T>, t| gbf_exact(x.x, x.y, t, p)),
        gradient: Arc::new(move |x: Vec2<T>, t| gbf_exact_gradient(x.x, x.y, t, p)),
    };
    let mut data = ModelData::from_exact(exact);
    data.clamp_below = Some(T::zero());
    make_custom(
        format!("gbf(p={p})"),
        T::one(),
        Arc::new(|u, q: Vec2<T>| u * (q.x + q.y)),
        Arc::new(move |c: T| c.powf(p)),
        Arc::new(move |c: T| c * (T::one() - c.powf(p))),
        data,
    )
}

/// Wraps user-supplied coefficients.
pub fn make_custom<T: Scalar>(
    name: impl Into<String>,
    lambda: T,
    convection: ConvectionFn<T>,
    g: ScalarFn<T>,
    f: ScalarFn<T>,
    data: ModelData<T>,
) -> Result<ModelSpec<T>, ModelError> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(ModelError::InvalidLambda(lambda.to_f64_lossy()));
    }
    Ok(ModelSpec {
        name: name.into(),
        lambda,
        convection,
        g,
        f,
        lipschitz: data.lipschitz,
        exact: data.exact,
        boundary_trace: data.boundary_trace,
        initial: data.initial,
        clamp_below: data.clamp_below,
    })
}

/// Heat equation `∂_t c = λΔc` with zero data (so the exact solution is 0).
pub fn make_heat<T: Scalar>(lambda: T) -> Result<ModelSpec<T>, ModelError> {
    let mut data = ModelData::homogeneous();
    data.exact = Some(ExactSolution {
        value: Arc::new(|_, _| T::zero()),
        gradient: Arc::new(|_, _| Vec2::zero()),
    });
    make_custom(
        "heat",
        lambda,
        Arc::new(|_, _| T::zero()),
        Arc::new(|_| T::zero()),
        Arc::new(|_| T::zero()),
        data,
    )
}
