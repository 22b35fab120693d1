//! Elastic curves from shape parameters `(k, λ, μ)` and geodesic paths between
//! them by direct minimization of the discrete path energy.
//!
//! The curvature profile solves `κ_θθ = P(κ)` with
//!
//! ```text
//! P(κ) = ½(λ − 2K)κ − ½κ³ + μ²/κ³ = −R(κ) / (2κ³),
//! R(k) = k⁶ + (2K − λ)k⁴ − 2μ²,
//! ```
//!
//! started at the amplitude, `κ(0) = k`, `κ_θ(0) = 0`, and torsion is
//! `τ = μ/κ²`. Constant solutions are exactly the zeros of `R`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrete_curves::{CurveConfig, DiscreteCurve};
use crate::error::{Error, Result};
use crate::numerics::NaturalSpline;
use crate::scalar::{from_usize, Real};
use crate::sobolev_metric::CurvePath;
use crate::space_forms::{SpaceForm, FRAME_TOL};
use crate::stencil::{self, Topology};
use crate::vector::Vec3;

/// Sign of the `μ²` term in the circle relation, fixed by a direct
/// first-variation test of `∫κ² + λ` on a helix.
pub const MU_SIGN: f64 = -1.0;
pub const MIN_PROFILE_SAMPLES: usize = 64;
/// `|κ|` below this with `μ ≠ 0` is a torsion singularity.
pub const SINGULAR_KAPPA: f64 = 1e-8;
// RK4 step bound, step times local frequency
const STEP_PHASE: f64 = 0.02;
const FRAME_STEP_PHASE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams<T> {
    pub k: T,
    pub lambda: T,
    pub mu: T,
}

impl<T: Real> ShapeParams<T> {
    pub fn new(k: T, lambda: T, mu: T) -> Self {
        Self { k, lambda, mu }
    }

    /// `R(k)`; zero exactly when `κ ≡ k` solves the profile equation.
    pub fn circle_locus_residual(&self, curvature: T) -> T {
        let k2 = self.k * self.k;
        let k4 = k2 * k2;
        k4 * k2
            + (T::two() * curvature - self.lambda) * k4
            + T::c(MU_SIGN) * T::two() * self.mu * self.mu
    }

    /// Tension placing `(k, ·, μ)` on the circle locus.
    pub fn circle_lambda(k: T, mu: T, curvature: T) -> T {
        let k2 = k * k;
        k2 + T::two() * curvature + T::c(MU_SIGN) * T::two() * mu * mu / (k2 * k2)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.k, self.lambda, self.mu]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    fn lerp(self, other: Self, s: T) -> Self {
        let w = T::one() - s;
        Self::new(
            self.k * w + other.k * s,
            self.lambda * w + other.lambda * s,
            self.mu * w + other.mu * s,
        )
    }

    fn is_finite(&self) -> bool {
        self.k.is_finite() && self.lambda.is_finite() && self.mu.is_finite()
    }
}

/// Position and orthonormal frame `(T, N, B)` at `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame<T> {
    pub origin: Vec3<T>,
    pub t: Vec3<T>,
    pub n: Vec3<T>,
    pub b: Vec3<T>,
}

impl<T: Real> Frame<T> {
    pub fn new(origin: Vec3<T>, t: Vec3<T>, n: Vec3<T>, b: Vec3<T>) -> Self {
        Self { origin, t, n, b }
    }

    /// Origin at zero, `(T, N, B) = (x̂, ŷ, ẑ)`.
    pub fn standard() -> Self {
        let (o, i) = (T::zero(), T::one());
        Self::new(
            Vec3::zero(),
            Vec3::new(i, o, o),
            Vec3::new(o, i, o),
            Vec3::new(o, o, i),
        )
    }

    /// Largest deviation from orthonormality in the metric of `space`; on
    /// surfaces only `(T, N)` are checked, together with tangency.
    pub fn defect(&self, space: &SpaceForm<T>) -> T {
        let g = |a, b| space.inner(a, b);
        let mut d = (g(self.t, self.t) - T::one())
            .abs()
            .max((g(self.n, self.n) - T::one()).abs())
            .max(g(self.t, self.n).abs());
        if space.is_surface() {
            d = d
                .max(space.tangency_residual(self.origin, self.t))
                .max(space.tangency_residual(self.origin, self.n));
        } else {
            d = d
                .max((g(self.b, self.b) - T::one()).abs())
                .max(g(self.t, self.b).abs())
                .max(g(self.n, self.b).abs());
        }
        d
    }

    pub fn validate(&self, space: &SpaceForm<T>) -> Result<()> {
        if space.is_surface() {
            space.check_on_surface(self.origin)?;
        }
        let defect = self.defect(space);
        if !(defect <= T::tol(FRAME_TOL)) {
            return Err(Error::FrameNotOrthonormal {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Everything needed to generate one elastic curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticaParams<T> {
    pub shape: ShapeParams<T>,
    /// Ambient sectional curvature `K`.
    pub curvature: T,
    pub length: T,
    pub frame: Frame<T>,
}

impl<T: Real> ElasticaParams<T> {
    pub fn new(shape: ShapeParams<T>, curvature: T, length: T, frame: Frame<T>) -> Result<Self> {
        let p = Self {
            shape,
            curvature,
            length,
            frame,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ShapeParams { k, lambda, mu } = self.shape;
        if !self.shape.is_finite() || !self.curvature.is_finite() {
            return Err(Error::Domain("shape parameters must be finite".into()));
        }
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return Err(Error::Domain(format!(
                "curve length must be positive, got {}",
                self.length
            )));
        }
        if k < T::zero() {
            return Err(Error::Domain(format!("amplitude k must be ≥ 0, got {k}")));
        }
        if mu != T::zero() && !(k > T::zero()) {
            return Err(Error::Domain("torsion constant μ ≠ 0 needs k > 0".into()));
        }
        let _ = lambda;
        let space = self.space()?;
        self.frame.validate(&space)
    }

    /// Euclidean 3-space when `K = 0`, otherwise the model surface (μ = 0).
    pub fn space(&self) -> Result<SpaceForm<T>> {
        if self.curvature == T::zero() {
            Ok(SpaceForm::euclidean3())
        } else if self.shape.mu == T::zero() {
            SpaceForm::surface_with_curvature(self.curvature)
        } else {
            Err(Error::Capability(
                "elastica with torsion need K = 0 (Euclidean 3-space)".into(),
            ))
        }
    }

    pub fn circle_locus_residual(&self) -> T {
        self.shape.circle_locus_residual(self.curvature)
    }

    /// `P(κ)`.
    pub fn rhs(&self, kappa: T) -> T {
        let ShapeParams { lambda, mu, .. } = self.shape;
        let k3 = kappa * kappa * kappa;
        let mut p = T::half() * (lambda - T::two() * self.curvature) * kappa - T::half() * k3;
        if mu != T::zero() {
            p += mu * mu / k3;
        }
        p
    }

    /// `P′(κ)`.
    fn rhs_derivative(&self, kappa: T) -> T {
        let ShapeParams { lambda, mu, .. } = self.shape;
        let k2 = kappa * kappa;
        let mut d = T::half() * (lambda - T::two() * self.curvature) - T::c(1.5) * k2;
        if mu != T::zero() {
            d -= T::c(3.0) * mu * mu / (k2 * k2);
        }
        d
    }

    /// `Q(κ)` with `Q′ = −2P`, so `κ_θ² + Q(κ)` is constant.
    pub fn potential(&self, kappa: T) -> T {
        let ShapeParams { lambda, mu, .. } = self.shape;
        let k2 = kappa * kappa;
        let mut q = -(lambda - T::two() * self.curvature) * k2 * T::half() + k2 * k2 * T::c(0.25);
        if mu != T::zero() {
            q += mu * mu / k2;
        }
        q
    }

    /// True when `κ(0) = k` is a maximum of the profile, i.e. `P(k) ≤ 0`.
    pub fn starts_at_maximum(&self) -> bool {
        self.shape.k == T::zero() || self.rhs(self.shape.k) <= T::zero()
    }
}

/// Sampled curvature profile on `θ_i = iL/(n−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile<T> {
    pub theta: Vec<T>,
    pub kappa: Vec<T>,
    pub kappa_theta: Vec<T>,
    pub tau: Vec<T>,
}

impl<T: Real> CurvatureProfile<T> {
    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    /// `κ_θ² + Q(κ)` at each sample.
    pub fn first_integral(&self, params: &ElasticaParams<T>) -> Vec<T> {
        self.kappa
            .iter()
            .zip(&self.kappa_theta)
            .map(|(k, d)| *d * *d + params.potential(*k))
            .collect()
    }
}

fn rk4_step<T: Real>(p: &ElasticaParams<T>, y: (T, T), h: T) -> (T, T) {
    let f = |(k, d): (T, T)| (d, p.rhs(k));
    let two = T::two();
    let a = f(y);
    let b = f((y.0 + a.0 * h * T::half(), y.1 + a.1 * h * T::half()));
    let c = f((y.0 + b.0 * h * T::half(), y.1 + b.1 * h * T::half()));
    let d = f((y.0 + c.0 * h, y.1 + c.1 * h));
    let sixth = h / T::c(6.0);
    (
        y.0 + (a.0 + two * b.0 + two * c.0 + d.0) * sixth,
        y.1 + (a.1 + two * b.1 + two * c.1 + d.1) * sixth,
    )
}

/// Integrates the profile equation from the amplitude over `[0, L]`.
pub fn solve_curvature_profile<T: Real>(
    params: &ElasticaParams<T>,
    n: usize,
) -> Result<CurvatureProfile<T>> {
    if n < MIN_PROFILE_SAMPLES {
        return Err(Error::Precondition(format!(
            "need at least {MIN_PROFILE_SAMPLES} profile samples, got {n}"
        )));
    }
    params.validate()?;
    let mu = params.shape.mu;
    let k = params.shape.k;
    let dt = params.length / from_usize::<T>(n - 1);
    let floor = T::c(SINGULAR_KAPPA);
    let phase = T::c(STEP_PHASE);
    let base_freq = params.rhs_derivative(k).abs().sqrt();

    let mut theta = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut kappa_theta = Vec::with_capacity(n);
    let mut y = (k, T::zero());
    for i in 0..n {
        theta.push(from_usize::<T>(i) * dt);
        kappa.push(y.0);
        kappa_theta.push(y.1);
        if i + 1 == n {
            break;
        }
        let freq = T::one() + base_freq + params.rhs_derivative(y.0).abs().sqrt();
        let steps = (dt * freq / phase).ceil().to_usize().unwrap_or(usize::MAX);
        if steps > 1_000_000 {
            return Err(Error::Numeric(format!(
                "profile step size collapsed near θ = {}",
                theta[i]
            )));
        }
        let h = dt / from_usize::<T>(steps.max(1));
        for _ in 0..steps.max(1) {
            y = rk4_step(params, y, h);
            if !(y.0.is_finite() && y.1.is_finite()) {
                return Err(Error::Numeric(format!(
                    "profile integration diverged near θ = {}",
                    theta[i]
                )));
            }
            if mu != T::zero() && y.0.abs() < floor {
                return Err(Error::Singularity(format!(
                    "curvature reached 0 near θ = {} with μ = {mu}",
                    theta[i]
                )));
            }
        }
    }
    let tau = kappa
        .iter()
        .map(|&c| {
            if mu == T::zero() {
                T::zero()
            } else {
                mu / (c * c)
            }
        })
        .collect();
    Ok(CurvatureProfile {
        theta,
        kappa,
        kappa_theta,
        tau,
    })
}

#[derive(Clone, Copy)]
struct FrenetState<T> {
    c: Vec3<T>,
    t: Vec3<T>,
    n: Vec3<T>,
    b: Vec3<T>,
}

impl<T: Real> FrenetState<T> {
    fn axpy(self, h: T, d: Self) -> Self {
        Self {
            c: self.c + d.c * h,
            t: self.t + d.t * h,
            n: self.n + d.n * h,
            b: self.b + d.b * h,
        }
    }
}

/// Frenet equations with the ambient term `−Kc` on surfaces:
/// `c′ = T`, `T′ = κN − Kc`, `N′ = −κT + τB`, `B′ = −τN`.
fn frenet_rhs<T: Real>(s: &FrenetState<T>, kappa: T, tau: T, curvature: T) -> FrenetState<T> {
    FrenetState {
        c: s.t,
        t: s.n * kappa - s.c * curvature,
        n: s.b * tau - s.t * kappa,
        b: -(s.n * tau),
    }
}

/// Reconstructs the curve with curvature `kappa` and torsion `tau` sampled on
/// `θ_i = iL/(n−1)`, starting from the parameter frame.
pub fn reconstruct_curve<T: Real>(
    params: &ElasticaParams<T>,
    kappa: &[T],
    tau: &[T],
) -> Result<DiscreteCurve<T>> {
    let n = kappa.len();
    if tau.len() != n {
        return Err(Error::GridMismatch(format!(
            "κ has {n} samples but τ has {}",
            tau.len()
        )));
    }
    if n < 8 {
        return Err(Error::Precondition(format!(
            "need at least 8 samples, got {n}"
        )));
    }
    let space = params.space()?;
    params.frame.validate(&space)?;
    let surface = space.is_surface();
    if surface && tau.iter().any(|t| *t != T::zero()) {
        return Err(Error::Capability(
            "torsion is only supported in Euclidean 3-space".into(),
        ));
    }
    let big_k = if surface { params.curvature } else { T::zero() };
    let dt = params.length / from_usize::<T>(n - 1);
    let kmax = kappa
        .iter()
        .chain(tau)
        .fold(big_k.abs().sqrt(), |m, v| m.max(v.abs()));
    let steps = ((dt * (T::one() + kmax) / T::c(FRAME_STEP_PHASE)).ceil())
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let h = dt / from_usize::<T>(steps);
    let sub = T::one() / from_usize::<T>(steps);
    let at = |x: T| -> (T, T) { (stencil::lagrange4(kappa, x), stencil::lagrange4(tau, x)) };

    let f = params.frame;
    let mut state = FrenetState {
        c: f.origin,
        t: f.t,
        n: f.n,
        b: f.b,
    };
    let mut points = Vec::with_capacity(n);
    points.push(space.retract(state.c));
    for i in 0..n - 1 {
        for j in 0..steps {
            let x0 = from_usize::<T>(i) + from_usize::<T>(j) * sub;
            let (k0, t0) = at(x0);
            let (k1, t1) = at(x0 + sub * T::half());
            let (k2, t2) = at(x0 + sub);
            let a = frenet_rhs(&state, k0, t0, big_k);
            let b = frenet_rhs(&state.axpy(h * T::half(), a), k1, t1, big_k);
            let c = frenet_rhs(&state.axpy(h * T::half(), b), k1, t1, big_k);
            let d = frenet_rhs(&state.axpy(h, c), k2, t2, big_k);
            let sixth = h / T::c(6.0);
            state = FrenetState {
                c: state.c + (a.c + (b.c + c.c) * T::two() + d.c) * sixth,
                t: state.t + (a.t + (b.t + c.t) * T::two() + d.t) * sixth,
                n: state.n + (a.n + (b.n + c.n) * T::two() + d.n) * sixth,
                b: state.b + (a.b + (b.b + c.b) * T::two() + d.b) * sixth,
            };
        }
        if !state.c.max_abs().is_finite() {
            return Err(Error::Numeric("frame integration diverged".into()));
        }
        points.push(space.retract(state.c));
    }
    DiscreteCurve::build(space, points, Topology::Open, CurveConfig::default())
}

/// Profile plus reconstruction.
pub fn generate_elastica<T: Real>(
    params: &ElasticaParams<T>,
    n: usize,
) -> Result<DiscreteCurve<T>> {
    let profile = solve_curvature_profile(params, n)?;
    reconstruct_curve(params, &profile.kappa, &profile.tau)
}

pub fn circle_locus_residual<T: Real>(params: &ElasticaParams<T>) -> T {
    params.circle_locus_residual()
}

/// How curves along a path are positioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// Every curve starts at the shared frame.
    #[default]
    InitFrame,
    /// Curves start at the shared frame and are then translated so that
    /// their centroid sits at the frame origin (`K = 0` only).
    Centroid,
}

impl Gauge {
    pub fn name(self) -> &'static str {
        match self {
            Gauge::InitFrame => "init_frame",
            Gauge::Centroid => "centroid",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "init_frame" => Some(Gauge::InitFrame),
            "centroid" => Some(Gauge::Centroid),
            _ => None,
        }
    }
}

/// How curve length varies along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthMode {
    #[default]
    Fixed,
    /// `L(s) = L · k_start / k(s)`, keeping total turning fixed.
    ScaleWithAmplitude,
}

impl LengthMode {
    pub fn name(self) -> &'static str {
        match self {
            LengthMode::Fixed => "fixed",
            LengthMode::ScaleWithAmplitude => "scale_with_amplitude",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(LengthMode::Fixed),
            "scale_with_amplitude" => Some(LengthMode::ScaleWithAmplitude),
            _ => None,
        }
    }
}

/// Two shapes sharing `K`, `L` and the initial frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticaEndpoints<T> {
    pub curvature: T,
    pub length: T,
    pub frame: Frame<T>,
    pub start: ShapeParams<T>,
    pub end: ShapeParams<T>,
    pub gauge: Gauge,
    pub length_mode: LengthMode,
}

impl<T: Real> ElasticaEndpoints<T> {
    pub fn new(
        curvature: T,
        length: T,
        frame: Frame<T>,
        start: ShapeParams<T>,
        end: ShapeParams<T>,
    ) -> Result<Self> {
        let e = Self {
            curvature,
            length,
            frame,
            start,
            end,
            gauge: Gauge::InitFrame,
            length_mode: LengthMode::Fixed,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_gauge(mut self, gauge: Gauge) -> Result<Self> {
        self.gauge = gauge;
        self.validate()?;
        Ok(self)
    }

    pub fn with_length_mode(mut self, mode: LengthMode) -> Result<Self> {
        self.length_mode = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gauge == Gauge::Centroid && self.curvature != T::zero() {
            return Err(Error::Capability("the centroid gauge needs K = 0".into()));
        }
        if self.length_mode == LengthMode::ScaleWithAmplitude && !(self.start.k > T::zero()) {
            return Err(Error::Domain(
                "length scaling needs a positive start amplitude".into(),
            ));
        }
        self.params(self.start)?;
        self.params(self.end)?;
        Ok(())
    }

    /// Parameters of the curve with shape `shape` on this path.
    pub fn params(&self, shape: ShapeParams<T>) -> Result<ElasticaParams<T>> {
        let length = match self.length_mode {
            LengthMode::Fixed => self.length,
            LengthMode::ScaleWithAmplitude => {
                if !(shape.k > T::zero()) {
                    return Err(Error::Domain(format!(
                        "length scaling needs k > 0, got {}",
                        shape.k
                    )));
                }
                self.length * self.start.k / shape.k
            }
        };
        ElasticaParams::new(shape, self.curvature, length, self.frame)
    }

    /// The curve with shape `shape` in this path's gauge.
    pub fn generate(&self, shape: ShapeParams<T>, n: usize) -> Result<DiscreteCurve<T>> {
        let params = self.params(shape)?;
        let curve = generate_elastica(&params, n)?;
        match self.gauge {
            Gauge::InitFrame => Ok(curve),
            Gauge::Centroid => {
                let shift = self.frame.origin - curve.centroid();
                let pts = curve.points().iter().map(|p| *p + shift).collect();
                DiscreteCurve::build(*curve.space(), pts, Topology::Open, *curve.config())
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.start == self.end
    }
}

/// A parameter trajectory through `q` interior control points.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticaPathSpec<T> {
    pub endpoints: ElasticaEndpoints<T>,
    pub control_points: Vec<ShapeParams<T>>,
    /// Curves along the path.
    pub m: usize,
    /// Samples per curve.
    pub n: usize,
}

impl<T: Real> ElasticaPathSpec<T> {
    pub fn new(
        endpoints: ElasticaEndpoints<T>,
        control_points: Vec<ShapeParams<T>>,
        m: usize,
        n: usize,
    ) -> Result<Self> {
        if control_points.is_empty() {
            return Err(Error::Precondition(
                "need at least one control point".into(),
            ));
        }
        if m < 3 {
            return Err(Error::Precondition(format!(
                "need at least 3 curves, got {m}"
            )));
        }
        if n < MIN_PROFILE_SAMPLES {
            return Err(Error::Precondition(format!(
                "need at least {MIN_PROFILE_SAMPLES} samples per curve, got {n}"
            )));
        }
        Ok(Self {
            endpoints,
            control_points,
            m,
            n,
        })
    }

    /// Control points evenly spaced on the straight line between endpoints.
    pub fn linear(endpoints: ElasticaEndpoints<T>, q: usize, m: usize, n: usize) -> Result<Self> {
        let cps = (1..=q)
            .map(|i| {
                let s = from_usize::<T>(i) / from_usize::<T>(q + 1);
                endpoints.start.lerp(endpoints.end, s)
            })
            .collect();
        Self::new(endpoints, cps, m, n)
    }

    pub fn q(&self) -> usize {
        self.control_points.len()
    }

    /// Node positions `0, 1/(q+1), …, 1`.
    pub fn nodes(&self) -> Vec<T> {
        let q = self.q();
        (0..q + 2)
            .map(|i| from_usize::<T>(i) / from_usize::<T>(q + 1))
            .collect()
    }

    /// Shapes at the `m` uniform path samples, by natural cubic splines.
    pub fn trajectory(&self) -> Result<Vec<ShapeParams<T>>> {
        let nodes = self.nodes();
        let mut all = Vec::with_capacity(self.q() + 2);
        all.push(self.endpoints.start);
        all.extend_from_slice(&self.control_points);
        all.push(self.endpoints.end);
        let splines = (0..3)
            .map(|c| {
                NaturalSpline::new(nodes.clone(), all.iter().map(|p| p.to_array()[c]).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.m)
            .map(|j| {
                if j == 0 {
                    return self.endpoints.start;
                }
                if j + 1 == self.m {
                    return self.endpoints.end;
                }
                let s = from_usize::<T>(j) / from_usize::<T>(self.m - 1);
                ShapeParams::new(splines[0].eval(s), splines[1].eval(s), splines[2].eval(s))
            })
            .collect())
    }

    /// Flattened interior coordinates `(k, λ, μ)` per control point.
    pub fn coordinates(&self) -> Vec<T> {
        self.control_points
            .iter()
            .flat_map(|p| p.to_array())
            .collect()
    }

    fn with_coordinates(&self, x: &[T]) -> Self {
        let mut s = self.clone();
        s.control_points = x
            .chunks(3)
            .map(|c| ShapeParams::new(c[0], c[1], c[2]))
            .collect();
        s
    }
}

/// Discrete path energy of the materialized spec.
pub fn elastica_path_energy<T: Real>(spec: &ElasticaPathSpec<T>) -> Result<(T, CurvePath<T>)> {
    let shapes = spec.trajectory()?;
    let curves = shapes
        .iter()
        .enumerate()
        .map(|(j, s)| {
            spec.endpoints
                .generate(*s, spec.n)
                .map_err(|e| e.at_sample(j))
        })
        .collect::<Result<Vec<_>>>()?;
    let path = CurvePath::new(curves)?;
    Ok((path.energy()?, path))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub seed: u64,
    pub max_restarts: usize,
    pub max_iter: usize,
    /// Stop when the simplex spread falls below this, relative to the best energy.
    pub rel_tol: f64,
    /// Upper bound on interior amplitudes.
    pub k_max: f64,
    /// Initial simplex edge, relative to each coordinate's magnitude.
    pub initial_step: f64,
    /// Scale of the random restart jitter.
    pub restart_jitter: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_restarts: 3,
            max_iter: 500,
            rel_tol: 1e-8,
            k_max: 50.0,
            initial_step: 0.1,
            restart_jitter: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult<T> {
    pub spec: ElasticaPathSpec<T>,
    pub energy: T,
    /// Best energy each time it strictly improved, starting from the first
    /// feasible evaluation.
    pub trace: Vec<T>,
    pub path: CurvePath<T>,
    /// Objective evaluations performed.
    pub evaluations: usize,
}

struct Objective<'a, T> {
    base: &'a ElasticaPathSpec<T>,
    pinned_mu: bool,
    k_max: T,
    best: Option<(T, Vec<T>)>,
    trace: Vec<T>,
    evaluations: usize,
}

impl<'a, T: Real> Objective<'a, T> {
    fn expand(&self, x: &[T]) -> Vec<T> {
        if !self.pinned_mu {
            return x.to_vec();
        }
        x.chunks(2).flat_map(|c| [c[0], c[1], T::zero()]).collect()
    }

    fn eval(&mut self, x: &[T]) -> T {
        self.evaluations += 1;
        let full = self.expand(x);
        let spec = self.base.with_coordinates(&full);
        let feasible = spec
            .control_points
            .iter()
            .all(|p| p.is_finite() && p.k > T::zero() && p.k <= self.k_max);
        if !feasible {
            return T::infinity();
        }
        let e = match elastica_path_energy(&spec) {
            Ok((e, _)) if e.is_finite() => e,
            _ => return T::infinity(),
        };
        let improved = self.best.as_ref().is_none_or(|(b, _)| e < *b);
        if improved {
            self.best = Some((e, full));
            self.trace.push(e);
        }
        e
    }
}

/// Nelder–Mead on the objective from the simplex around `x0`.
fn nelder_mead<T: Real>(
    obj: &mut Objective<'_, T>,
    x0: &[T],
    step: T,
    max_iter: usize,
    rel_tol: T,
) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(d + 1);
    let f0 = obj.eval(x0);
    simplex.push((x0.to_vec(), f0));
    for i in 0..d {
        let mut x = x0.to_vec();
        let delta = step * x[i].abs().max(T::c(0.5));
        x[i] += delta;
        let f = obj.eval(&x);
        simplex.push((x, f));
    }
    let (alpha, gamma, rho, sigma) = (T::one(), T::two(), T::half(), T::half());
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        if best.is_finite() && worst.is_finite() {
            let scale = best.abs().max(T::epsilon());
            if (worst - best) / scale < rel_tol {
                break;
            }
        }
        let mut centroid = vec![T::zero(); d];
        for (x, _) in simplex.iter().take(d) {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += *v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= from_usize::<T>(d);
        }
        let toward = |coef: T, from: &[T]| -> Vec<T> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| *c + coef * (*c - *w))
                .collect()
        };
        let worst_x = simplex[d].0.clone();
        let xr = toward(alpha, &worst_x);
        let fr = obj.eval(&xr);
        if fr < simplex[0].1 {
            let xe = toward(gamma, &worst_x);
            let fe = obj.eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = toward(rho, &worst_x);
            let f = obj.eval(&xc);
            (xc, f)
        } else {
            let xc = toward(-rho, &worst_x);
            let f = obj.eval(&xc);
            (xc, f)
        };
        if fc < worst.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x: Vec<T> = x_best
                .iter()
                .zip(&entry.0)
                .map(|(b, v)| *b + sigma * (*v - *b))
                .collect();
            let f = obj.eval(&x);
            *entry = (x, f);
        }
    }
}

/// Minimizes the path energy over the interior control coordinates.
///
/// With `K ≠ 0` the curves live on a surface, so `μ` stays pinned at zero and
/// only `(k, λ)` move.
pub fn optimize_elastica_path<T: Real>(
    endpoints: ElasticaEndpoints<T>,
    q: usize,
    m: usize,
    n: usize,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult<T>> {
    endpoints.validate()?;
    let init = ElasticaPathSpec::linear(endpoints, q, m, n)?;
    if endpoints.is_trivial() {
        let (energy, path) = elastica_path_energy(&init)?;
        return Ok(OptimizeResult {
            spec: init,
            energy,
            trace: vec![energy],
            path,
            evaluations: 1,
        });
    }
    let pinned_mu = endpoints.curvature != T::zero();
    if pinned_mu && (endpoints.start.mu != T::zero() || endpoints.end.mu != T::zero()) {
        return Err(Error::Capability(
            "torsion needs K = 0 (Euclidean 3-space)".into(),
        ));
    }
    let mut obj = Objective {
        base: &init,
        pinned_mu,
        k_max: T::c(opts.k_max),
        best: None,
        trace: Vec::new(),
        evaluations: 0,
    };
    let x_lin: Vec<T> = if pinned_mu {
        init.control_points
            .iter()
            .flat_map(|p| [p.k, p.lambda])
            .collect()
    } else {
        init.coordinates()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for restart in 0..opts.max_restarts.max(1) {
        let x0: Vec<T> = if restart == 0 {
            x_lin.clone()
        } else {
            let center = obj
                .best
                .as_ref()
                .map(|(_, b)| b.clone())
                .map(|full| {
                    if pinned_mu {
                        full.chunks(3).flat_map(|c| [c[0], c[1]]).collect()
                    } else {
                        full
                    }
                })
                .unwrap_or_else(|| x_lin.clone());
            center
                .iter()
                .map(|v| {
                    let u: f64 = rng.gen_range(-1.0..1.0);
                    *v + T::c(u * opts.restart_jitter) * v.abs().max(T::c(0.5))
                })
                .collect()
        };
        nelder_mead(
            &mut obj,
            &x0,
            T::c(opts.initial_step),
            opts.max_iter,
            T::c(opts.rel_tol),
        );
    }
    let evaluations = obj.evaluations;
    let trace = std::mem::take(&mut obj.trace);
    let (_, best) = obj.best.ok_or_else(|| {
        Error::Optimization(format!(
            "no feasible interior point after {} restarts",
            opts.max_restarts
        ))
    })?;
    let spec = init.with_coordinates(&best);
    let (energy, path) = elastica_path_energy(&spec)?;
    Ok(OptimizeResult {
        spec,
        energy,
        trace,
        path,
        evaluations,
    })
}
