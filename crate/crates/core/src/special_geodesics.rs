//! Geodesics of concentric circles on constant-curvature surfaces and of
//! coaxial helices, reduced to the conserved quantity `E = (r′)² f(r)`.
//!
//! A path with `r(0) = r0`, `r(1) = r1` and constant `E` satisfies
//! `∫_{r0}^{r(s)} √f = s √E`, so `√E` is one quadrature and every sample
//! `r(s_j)` is a monotone inversion of it. The Sobolev speed is the constant
//! `ν = √(2π E)`.

use crate::discrete_curves::{build_curve, CurveConfig, DiscreteCurve};
use crate::error::{Error, Result};
use crate::numerics;
use crate::scalar::{from_usize, Real};
use crate::sobolev_metric::CurvePath;
use crate::space_forms::{Model, PolarFrame, SpaceForm};
use crate::stencil::{self, Topology};
use crate::vector::Vec3;

/// Smallest admissible radius; `f` blows up at `r = 0`.
pub const R_MIN: f64 = 1e-4;
pub const QUAD_TOL: f64 = 1e-10;
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    ConcentricCircles {
        space: SpaceForm<T>,
        frame: PolarFrame<T>,
    },
    Helices {
        pitch: T,
    },
}

impl<T: Real> Family<T> {
    /// The profile `f(r)` of the family.
    pub fn profile(&self, r: T) -> Result<T> {
        match self {
            Family::ConcentricCircles { space, .. } => circle_profile_f(space, r),
            Family::Helices { pitch } => helix_profile_f(r, *pitch),
        }
    }

    fn check_radius(&self, r: T) -> Result<()> {
        if !(r >= T::c(R_MIN)) {
            return Err(Error::Domain(format!(
                "radius {r} is below the minimum {R_MIN}"
            )));
        }
        self.profile(r).map(|_| ())
    }
}

/// A solved radius trajectory `s ↦ r(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusTrajectory<T> {
    pub family: Family<T>,
    pub s_grid: Vec<T>,
    pub r: Vec<T>,
    /// The constant `E = (r′)² f(r)`.
    pub conserved: T,
    /// Sobolev length of the path, `√(2π E)`.
    pub distance: T,
}

impl<T: Real> RadiusTrajectory<T> {
    /// Wraps arbitrary radius samples; `E` is taken as the mean of the
    /// finite-difference estimate.
    pub fn from_radii(family: Family<T>, r: Vec<T>) -> Result<Self> {
        let m = r.len();
        if m < 5 {
            return Err(Error::Precondition(format!(
                "need at least 5 radii, got {m}"
            )));
        }
        for &x in &r {
            family.check_radius(x)?;
        }
        let s_grid = uniform_s(m);
        let mut traj = Self {
            family,
            s_grid,
            r,
            conserved: T::zero(),
            distance: T::zero(),
        };
        let fd = traj.conserved_fd()?;
        traj.conserved = fd.iter().copied().sum::<T>() / from_usize(m);
        traj.distance = (T::two() * T::PI() * traj.conserved).sqrt();
        Ok(traj)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn ds(&self) -> T {
        T::one() / from_usize::<T>(self.len() - 1)
    }

    /// `(r′)² f(r)` with `r′` from second-order differences.
    pub fn conserved_fd(&self) -> Result<Vec<T>> {
        let h = self.ds();
        (0..self.len())
            .map(|j| {
                let dr = stencil::diff2nd(&self.r, h, j);
                Ok(dr * dr * self.family.profile(self.r[j])?)
            })
            .collect()
    }

    /// `r′` from fourth-order differences.
    pub fn radius_derivative(&self) -> Vec<T> {
        stencil::diff(&self.r, self.ds(), false)
    }
}

fn uniform_s<T: Real>(m: usize) -> Vec<T> {
    (0..m)
        .map(|j| from_usize::<T>(j) / from_usize::<T>(m - 1))
        .collect()
}

/// `f(r) = ω + ω_r² / ω` for concentric circles in `space`.
pub fn circle_profile_f<T: Real>(space: &SpaceForm<T>, r: T) -> Result<T> {
    if !space.is_surface() {
        return Err(Error::Capability(
            "concentric circles need a surface model".into(),
        ));
    }
    if !(r >= T::c(R_MIN)) {
        return Err(Error::Domain(format!(
            "radius {r} is below the minimum {R_MIN}"
        )));
    }
    let (w, wr) = space.omega_profile(r)?;
    Ok(w + wr * wr / w)
}

/// `f(r) = √(r² + h²) + 1/√(r² + h²)` for coaxial helices of pitch `h`.
pub fn helix_profile_f<T: Real>(r: T, h: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("helix radius {r} must be positive")));
    }
    let w = (r * r + h * h).sqrt();
    Ok(w + T::one() / w)
}

/// Solves the two-point problem `r(0) = r0`, `r(1) = r1` with constant
/// `(r′)² f(r)`; the trajectory is monotone.
pub fn solve_radius_trajectory<T: Real>(
    family: Family<T>,
    r0: T,
    r1: T,
    m: usize,
) -> Result<RadiusTrajectory<T>> {
    if m < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 s-samples, got {m}"
        )));
    }
    if !(r0 != r1) {
        return Err(Error::Precondition(format!(
            "endpoint radii must differ, got r0 = r1 = {r0}"
        )));
    }
    family.check_radius(r0)?;
    family.check_radius(r1)?;

    let sqrt_f = |r: T| family.profile(r).map(|f| f.sqrt()).unwrap_or(T::nan());
    let abs_tol = T::tol(QUAD_TOL);
    let rel_tol = T::tol(QUAD_TOL * 1e-2);
    let dir = if r1 > r0 { T::one() } else { -T::one() };
    // G(r) = dir ∫_{r0}^{r} √f, increasing as r moves from r0 to r1
    let g = |r: T| -> Result<T> {
        Ok(dir * numerics::integrate(sqrt_f, r0, r, abs_tol, rel_tol, 400)?.value)
    };
    let root_e = g(r1)?;
    let conserved = root_e * root_e;
    let s_grid: Vec<T> = uniform_s(m);
    let (lo, hi) = if r0 < r1 { (r0, r1) } else { (r1, r0) };

    let mut r = Vec::with_capacity(m);
    for (j, &s) in s_grid.iter().enumerate() {
        if j == 0 {
            r.push(r0);
            continue;
        }
        if j == m - 1 {
            r.push(r1);
            continue;
        }
        let target = s * root_e;
        // solve on the monotone coordinate x = dir (r - r0)
        let x = numerics::solve_monotone(
            |x: T| g(r0 + dir * x),
            |x: T| sqrt_f(r0 + dir * x),
            target,
            T::zero(),
            hi - lo,
            T::tol(ROOT_TOL),
            200,
        )?;
        r.push(r0 + dir * x);
    }

    Ok(RadiusTrajectory {
        family,
        s_grid,
        r,
        conserved,
        distance: (T::two() * T::PI() * conserved).sqrt(),
    })
}

/// Concentric-circle geodesic about the default polar frame of `space`.
pub fn solve_concentric_geodesic<T: Real>(
    space: SpaceForm<T>,
    r0: T,
    r1: T,
    m: usize,
    n: usize,
) -> Result<(RadiusTrajectory<T>, CurvePath<T>)> {
    solve_concentric_geodesic_with_frame(space, space.default_polar_frame(), r0, r1, m, n)
}

pub fn solve_concentric_geodesic_with_frame<T: Real>(
    space: SpaceForm<T>,
    frame: PolarFrame<T>,
    r0: T,
    r1: T,
    m: usize,
    n: usize,
) -> Result<(RadiusTrajectory<T>, CurvePath<T>)> {
    if !space.is_surface() {
        return Err(Error::Capability(
            "concentric circles need a surface model".into(),
        ));
    }
    let traj = solve_radius_trajectory(Family::ConcentricCircles { space, frame }, r0, r1, m)?;
    let path = materialize(&traj, n)?;
    Ok((traj, path))
}

/// Coaxial helix geodesic `c(s, t) = (r cos t, r sin t, h t)`.
pub fn solve_helix_geodesic<T: Real>(
    r0: T,
    r1: T,
    pitch: T,
    m: usize,
    n: usize,
) -> Result<(RadiusTrajectory<T>, CurvePath<T>)> {
    let traj = solve_radius_trajectory(Family::Helices { pitch }, r0, r1, m)?;
    let path = materialize(&traj, n)?;
    Ok((traj, path))
}

/// Builds the curves of a trajectory on an `n`-point grid.
pub fn materialize<T: Real>(traj: &RadiusTrajectory<T>, n: usize) -> Result<CurvePath<T>> {
    let curves = traj
        .r
        .iter()
        .map(|&r| family_curve(&traj.family, r, n))
        .collect::<Result<Vec<_>>>()?;
    CurvePath::new(curves)
}

fn family_curve<T: Real>(family: &Family<T>, r: T, n: usize) -> Result<DiscreteCurve<T>> {
    match family {
        Family::ConcentricCircles { space, frame } => {
            let pts = Topology::<T>::Closed
                .grid(n)
                .iter()
                .map(|&t| space.exp_polar(frame, r, t).map(|p| space.retract(p)))
                .collect::<Result<Vec<_>>>()?;
            build_curve(*space, pts, true)
        }
        Family::Helices { pitch } => {
            let h = *pitch;
            let topology = Topology::Screw(Vec3::new(T::zero(), T::zero(), T::two() * T::PI() * h));
            let pts = topology
                .grid(n)
                .iter()
                .map(|&t| Vec3::new(r * t.cos(), r * t.sin(), h * t))
                .collect();
            DiscreteCurve::build(
                SpaceForm::euclidean3(),
                pts,
                topology,
                CurveConfig::default(),
            )
        }
    }
}

/// `(u′)²/cos u` relative to its mean, `u = π/2 − r`, on the unit sphere.
///
/// `u′` uses fourth-order differences in `s`.
pub fn pendulum_residual<T: Real>(traj: &RadiusTrajectory<T>) -> Result<Vec<T>> {
    match traj.family {
        Family::ConcentricCircles { space, .. }
            if space.model() == Model::Sphere2D
                && (space.curvature() - T::one()).abs() <= T::epsilon() * T::c(4.0) => {}
        _ => {
            return Err(Error::Precondition(
                "the pendulum form applies to circles on the unit sphere".into(),
            ))
        }
    }
    if traj.len() < 5 {
        return Err(Error::Precondition("need at least 5 s-samples".into()));
    }
    let du = traj.radius_derivative();
    let mut q = Vec::with_capacity(traj.len());
    for (r, d) in traj.r.iter().zip(&du) {
        let cos_u = (T::FRAC_PI_2() - *r).cos();
        if cos_u.abs() < T::c(1e-12) {
            return Err(Error::Degenerate(format!("cos u vanishes at r = {r}")));
        }
        q.push(*d * *d / cos_u);
    }
    let mean = q.iter().copied().sum::<T>() / from_usize(q.len());
    if mean == T::zero() {
        return Err(Error::Degenerate("u′ vanishes along the path".into()));
    }
    Ok(q.iter().map(|v| (*v - mean) / mean).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{relative_spread, sup_norm};

    #[test]
    fn circle_profile_examples() {
        let plane = SpaceForm::<f64>::plane();
        assert_eq!(circle_profile_f(&plane, 1.0).unwrap(), 2.0);
        let sphere = SpaceForm::<f64>::sphere(1.0).unwrap();
        assert!(
            (circle_profile_f(&sphere, std::f64::consts::FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15
        );
        let hyp = SpaceForm::<f64>::hyperbolic(-1.0).unwrap();
        let f = circle_profile_f(&hyp, 1.0).unwrap();
        // sinh 1 + cosh² 1 / sinh 1
        assert!((f - 3.201_320_515_526_924_5).abs() < 1e-14);
        assert!(circle_profile_f(&plane, 1e-5).is_err());
    }

    #[test]
    fn helix_profile_examples() {
        assert_eq!(helix_profile_f(1.0, 0.0).unwrap(), 2.0);
        assert!((helix_profile_f(0.6f64, 0.8).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(helix_profile_f(2.0, 0.0).unwrap(), 2.5);
        assert!(helix_profile_f(0.0, 1.0).is_err());
        let plane = SpaceForm::<f64>::plane();
        assert_eq!(
            helix_profile_f(1.0, 0.0).unwrap(),
            circle_profile_f(&plane, 1.0).unwrap()
        );
    }

    #[test]
    fn rejects_equal_or_invalid_endpoints() {
        let plane = SpaceForm::<f64>::plane();
        assert!(matches!(
            solve_concentric_geodesic(plane, 1.0, 1.0, 16, 32),
            Err(Error::Precondition(_))
        ));
        let sphere = SpaceForm::<f64>::sphere(1.0).unwrap();
        assert!(matches!(
            solve_concentric_geodesic(sphere, 0.5, 3.5, 16, 32),
            Err(Error::Domain(_))
        ));
        assert!(solve_helix_geodesic(-1.0, 1.0, 0.5, 16, 32).is_err());
    }

    #[test]
    fn flat_trajectory_is_monotone_and_conserves_energy() {
        let plane = SpaceForm::<f64>::plane();
        let (traj, _) = solve_concentric_geodesic(plane, 1.0, 2.0, 65, 32).unwrap();
        assert!(traj.r.windows(2).all(|w| w[1] > w[0]));
        let fd = traj.conserved_fd().unwrap();
        for v in &fd {
            assert!((v / traj.conserved - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn reversed_endpoints_mirror_the_trajectory() {
        let sphere = SpaceForm::<f64>::sphere(1.0).unwrap();
        let (a, _) = solve_concentric_geodesic(sphere, 0.3, 1.2, 33, 16).unwrap();
        let (b, _) = solve_concentric_geodesic(sphere, 1.2, 0.3, 33, 16).unwrap();
        assert!((a.distance - b.distance).abs() < 1e-10);
        for (x, y) in a.r.iter().zip(b.r.iter().rev()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_geodesic_has_constant_speed() {
        let sphere = SpaceForm::<f64>::sphere(1.0).unwrap();
        let (traj, path) = solve_concentric_geodesic(sphere, 0.3, 1.2, 64, 256).unwrap();
        let nu = path.speed().unwrap();
        assert!(relative_spread(&nu) < 5e-3);
        let want = traj.distance;
        assert!((nu[10] / want - 1.0).abs() < 5e-3);
    }

    #[test]
    fn pendulum_examples() {
        let sphere = SpaceForm::<f64>::sphere(1.0).unwrap();
        let (traj, _) = solve_concentric_geodesic(sphere, 0.3, 1.2, 64, 16).unwrap();
        assert!(sup_norm(&pendulum_residual(&traj).unwrap()) < 1e-6);

        let r: f64 = 1.0;
        let u = std::f64::consts::FRAC_PI_2 - r;
        let f = circle_profile_f(&sphere, r).unwrap();
        assert!((f - 1.0 / r.sin()).abs() < 1e-14);
        assert!((f - 1.0 / u.cos()).abs() < 1e-14);

        let frame = sphere.default_polar_frame();
        let lin: Vec<f64> = (0..64).map(|j| 0.3 + 0.9 * j as f64 / 63.0).collect();
        let fam = Family::ConcentricCircles {
            space: sphere,
            frame,
        };
        let traj = RadiusTrajectory::from_radii(fam, lin).unwrap();
        assert!(sup_norm(&pendulum_residual(&traj).unwrap()) > 0.01);

        let plane = SpaceForm::<f64>::plane();
        let (flat, _) = solve_concentric_geodesic(plane, 1.0, 2.0, 16, 16).unwrap();
        assert!(pendulum_residual(&flat).is_err());
    }

    #[test]
    fn helix_conserved_quantity_matches_samples() {
        let (traj, path) = solve_helix_geodesic(1.0f64, 2.0, 1.0, 33, 64).unwrap();
        assert!(path.curve(0).screw_shift().is_some());
        let e = traj.conserved;
        for (r, v) in traj.r.iter().zip(traj.conserved_fd().unwrap()) {
            let _ = r;
            assert!((v / e - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn flat_distance_matches_reference() {
        let plane = SpaceForm::<f64>::plane();
        let (traj, _) = solve_concentric_geodesic(plane, 1.0, 2.0, 9, 16).unwrap();
        assert!((traj.distance - 3.709_899_441_211_935).abs() < 1e-9);
    }

    #[test]
    fn zero_pitch_helix_is_the_flat_circle_solution() {
        let plane = SpaceForm::<f64>::plane();
        let (a, _) = solve_concentric_geodesic(plane, 0.5, 1.5, 17, 16).unwrap();
        let (b, _) = solve_helix_geodesic(0.5, 1.5, 0.0, 17, 16).unwrap();
        assert!((a.distance - b.distance).abs() < 1e-10);
        for (x, y) in a.r.iter().zip(&b.r) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn helix_path_is_horizontal() {
        let (_, path) = solve_helix_geodesic(1.0f64, 2.0, 1.0, 17, 512).unwrap();
        for j in 0..path.len() {
            let d = sup_norm(&path.horizontality_defect(j).unwrap());
            assert!(d < 1e-4, "defect {d} at {j}");
        }
    }
}
