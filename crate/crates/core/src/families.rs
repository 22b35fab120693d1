//! Analytic curves and path families used to exercise the metric and the
//! variation formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrete_curves::{build_curve, DiscreteCurve};
use crate::error::Result;
use crate::scalar::{from_usize, Real};
use crate::sobolev_metric::CurvePath;
use crate::space_forms::SpaceForm;
use crate::stencil::Topology;
use crate::vector::Vec3;

fn s_at<T: Real>(j: usize, m: usize) -> T {
    from_usize::<T>(j) / from_usize::<T>(m - 1)
}

/// Counterclockwise plane circle of radius `r` about the origin.
pub fn plane_circle<T: Real>(n: usize, r: T) -> DiscreteCurve<T> {
    ellipse(n, r, r)
}

/// Plane ellipse `(a cos t, b sin t)`.
pub fn ellipse<T: Real>(n: usize, a: T, b: T) -> DiscreteCurve<T> {
    let pts = Topology::<T>::Closed
        .grid(n)
        .iter()
        .map(|t| Vec3::new(a * t.cos(), b * t.sin(), T::zero()))
        .collect();
    build_curve(SpaceForm::plane(), pts, true).expect("ellipse is immersed")
}

/// Concentric plane circles with radius `r(s)`.
pub fn plane_concentric<T: Real>(m: usize, n: usize, r: impl Fn(T) -> T) -> Result<CurvePath<T>> {
    let curves = (0..m).map(|j| plane_circle(n, r(s_at(j, m)))).collect();
    CurvePath::new(curves)
}

/// Geodesic circles of radius `r(s)` about the pole of the sphere of curvature `k`.
pub fn sphere_latitudes<T: Real>(
    k: T,
    m: usize,
    n: usize,
    r: impl Fn(T) -> T,
) -> Result<CurvePath<T>> {
    concentric_on(SpaceForm::sphere(k)?, m, n, r)
}

/// Concentric geodesic circles about the default polar frame of `space`.
pub fn concentric_on<T: Real>(
    space: SpaceForm<T>,
    m: usize,
    n: usize,
    r: impl Fn(T) -> T,
) -> Result<CurvePath<T>> {
    let frame = space.default_polar_frame();
    let grid = Topology::<T>::Closed.grid(n);
    let curves = (0..m)
        .map(|j| {
            let rj = r(s_at(j, m));
            let pts = grid
                .iter()
                .map(|&t| space.exp_polar(&frame, rj, t))
                .collect::<Result<Vec<_>>>()?;
            build_curve(space, pts, true)
        })
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(curves)
}

/// Parallel horocycle arcs on the hyperboloid of curvature `k < 0`.
///
/// In the upper half-plane these are the segments `y = e^{b s}`,
/// `x ∈ [−1, 1]`; the path is normal with constant `ρ` and every curve has
/// `κ² = −K`.
pub fn horocycles<T: Real>(k: T, m: usize, n: usize, b: T) -> Result<CurvePath<T>> {
    let space = SpaceForm::hyperbolic(k)?;
    let big_r = space.radius();
    let grid = Topology::<T>::Open.grid(n);
    let curves = (0..m)
        .map(|j| {
            let y = (b * s_at::<T>(j, m)).exp();
            let pts = grid
                .iter()
                .map(|&u| {
                    let x = T::two() * u - T::one();
                    let q = x * x + y * y;
                    Vec3::new(
                        x / y,
                        (q - T::one()) / (T::two() * y),
                        (q + T::one()) / (T::two() * y),
                    ) * big_r
                })
                .collect();
            build_curve(space, pts, false)
        })
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(curves)
}

/// Ellipses `((2 + s) cos t, sin t)`: curvature varies along each curve.
pub fn ellipse_path<T: Real>(m: usize, n: usize) -> Result<CurvePath<T>> {
    let curves = (0..m)
        .map(|j| ellipse(n, T::two() + s_at::<T>(j, m), T::one()))
        .collect();
    CurvePath::new(curves)
}

/// `c(s, t) = u(t) (1 − (s − ½) a(t))`: the unit circle at `s = ½` moved
/// with the normal velocity `c′ = a(t) N` there (`N = −u`).
pub fn normal_perturbation<T: Real>(
    m: usize,
    n: usize,
    a: impl Fn(T) -> T,
) -> Result<CurvePath<T>> {
    let grid = Topology::<T>::Closed.grid(n);
    let curves = (0..m)
        .map(|j| {
            let s = s_at::<T>(j, m) - T::half();
            let pts = grid
                .iter()
                .map(|&t| Vec3::new(t.cos(), t.sin(), T::zero()) * (T::one() - s * a(t)))
                .collect();
            build_curve(SpaceForm::plane(), pts, true)
        })
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(curves)
}

/// Smooth random normal displacement field for the unit circle.
#[derive(Debug, Clone)]
pub struct RandomPerturbation {
    modes: Vec<(f64, f64, f64, f64)>,
}

impl RandomPerturbation {
    /// Three Fourier modes in `t`, each with its own oscillation in `s`.
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-0.06..0.06),
                    rng.gen_range(-0.06..0.06),
                    rng.gen_range(2.0..4.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        Self { modes }
    }

    /// `ρ(s, t)`.
    pub fn rho(&self, s: f64, t: f64) -> f64 {
        self.modes
            .iter()
            .enumerate()
            .map(|(i, (a, b, freq, phase))| {
                let m = (i + 1) as f64;
                (a * (m * t).cos() + b * (m * t).sin()) * (freq * s + phase).sin()
            })
            .sum()
    }

    /// Path `c(s, t) = (1 − ρ(s, t)) u(t)`.
    pub fn path<T: Real>(&self, m: usize, n: usize) -> Result<CurvePath<T>> {
        let grid = Topology::<T>::Closed.grid(n);
        let curves = (0..m)
            .map(|j| {
                let s = s_at::<T>(j, m).to_f64_lossy();
                let pts = grid
                    .iter()
                    .map(|&t| {
                        let rho = T::c(self.rho(s, t.to_f64_lossy()));
                        Vec3::new(t.cos(), t.sin(), T::zero()) * (T::one() - rho)
                    })
                    .collect();
                build_curve(SpaceForm::plane(), pts, true)
            })
            .collect::<Result<Vec<_>>>()?;
        CurvePath::new(curves)
    }
}

/// Random perturbation family, see [`RandomPerturbation`].
pub fn random_normal_perturbation<T: Real>(seed: u64, m: usize, n: usize) -> Result<CurvePath<T>> {
    RandomPerturbation::new(seed).path(m, n)
}

/// Integral curve of the shortening flow from a circle of radius `r0`:
/// `R(s) = √(r0² − 2 s span)`, reparametrized so `s ∈ [0, 1]`.
pub fn shortening_flow_circles<T: Real>(
    m: usize,
    n: usize,
    r0: T,
    span: T,
) -> Result<CurvePath<T>> {
    plane_concentric(m, n, |s: T| (r0 * r0 - T::two() * s * span).sqrt())
}

/// Generic rng-driven sample, exposed for property tests.
pub fn jitter(seed: u64, len: usize, amplitude: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| rng.gen_range(-amplitude..amplitude))
        .collect()
}
