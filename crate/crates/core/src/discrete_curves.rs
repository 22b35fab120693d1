//! Sampled immersed curves and the geometry cached on them.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, Real};
use crate::space_forms::{Model, SpaceForm};
use crate::stencil::{self, Topology};
use crate::vector::Vec3;

/// Tolerances used while building a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveConfig {
    /// Below this curvature the 3D Frenet frame is flagged as undefined.
    pub kappa_floor: f64,
    /// Minimum `|dc/dt|` for the immersion condition.
    pub immersion_floor: f64,
    /// Accepted normal component of tangent fields, relative to `1 + |v|`.
    pub tangency_tol: f64,
    /// Resample to uniform arclength before caching the geometry.
    pub resample_arclength: bool,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            kappa_floor: 1e-8,
            immersion_floor: 1e-12,
            tangency_tol: 1e-9,
            resample_arclength: false,
        }
    }
}

pub const MIN_SAMPLES: usize = 8;

/// A sampled immersed curve on a uniform parameter grid.
#[derive(Debug, Clone)]
pub struct DiscreteCurve<T> {
    space: SpaceForm<T>,
    topology: Topology<T>,
    config: CurveConfig,
    t: Vec<T>,
    h: T,
    points: Vec<Vec3<T>>,
    omega: Vec<T>,
    tangent: Vec<Vec3<T>>,
    normal: Vec<Vec3<T>>,
    kappa: Vec<T>,
    binormal: Option<Vec<Vec3<T>>>,
    tau: Option<Vec<T>>,
    frame_flags: Vec<bool>,
}

/// Builds a curve with the default configuration.
pub fn build_curve<T: Real>(
    space: SpaceForm<T>,
    points: Vec<Vec3<T>>,
    closed: bool,
) -> Result<DiscreteCurve<T>> {
    let topology = if closed {
        Topology::Closed
    } else {
        Topology::Open
    };
    DiscreteCurve::build(space, points, topology, CurveConfig::default())
}

impl<T: Real> DiscreteCurve<T> {
    pub fn build(
        space: SpaceForm<T>,
        points: Vec<Vec3<T>>,
        topology: Topology<T>,
        config: CurveConfig,
    ) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES {
            return Err(Error::Precondition(format!(
                "a curve needs at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        if let Topology::Screw(_) = topology {
            if space.model() != Model::Euclidean3D {
                return Err(Error::Capability(
                    "screw-periodic curves are only supported in euclidean3d".into(),
                ));
            }
        }
        for p in &points {
            space.check_on_surface(*p)?;
        }
        let consecutive = points.windows(2).position(|w| w[0] == w[1]);
        if let Some(i) = consecutive {
            return Err(Error::Immersion {
                index: i + 1,
                speed: 0.0,
            });
        }

        let mut curve = Self::compute(space, points, topology, config)?;
        if config.resample_arclength {
            curve = curve.resample_arclength()?;
        }
        Ok(curve)
    }

    fn compute(
        space: SpaceForm<T>,
        points: Vec<Vec3<T>>,
        topology: Topology<T>,
        config: CurveConfig,
    ) -> Result<Self> {
        let n = points.len();
        let h = topology.spacing(n);
        let periodic = topology.is_periodic();

        let dc = stencil::diff_points(&points, h, &topology);
        let mut omega = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        for (i, (p, d)) in points.iter().zip(&dc).enumerate() {
            let d = space.project_unchecked(*p, *d);
            let w = space.norm(d);
            if !(w >= T::c(config.immersion_floor)) {
                return Err(Error::Immersion {
                    index: i,
                    speed: w.to_f64_lossy(),
                });
            }
            omega.push(w);
            tangent.push(d / w);
        }

        let dt = stencil::diff(&tangent, h, periodic);
        let acc: Vec<Vec3<T>> = (0..n)
            .map(|i| space.project_unchecked(points[i], dt[i] / omega[i]))
            .collect();

        let mut curve = Self {
            space,
            topology,
            config,
            t: topology.grid(n),
            h,
            points,
            omega,
            tangent,
            normal: Vec::with_capacity(n),
            kappa: Vec::with_capacity(n),
            binormal: None,
            tau: None,
            frame_flags: vec![false; n],
        };

        if space.is_surface() {
            for (i, a) in acc.iter().enumerate() {
                let nn = space
                    .rotate_tangent(curve.points[i], curve.tangent[i])
                    .expect("surface model");
                curve.kappa.push(space.inner(*a, nn));
                curve.normal.push(nn);
            }
        } else {
            curve.frenet_3d(&acc);
        }
        Ok(curve)
    }

    fn frenet_3d(&mut self, acc: &[Vec3<T>]) {
        let n = self.points.len();
        let floor = T::c(self.config.kappa_floor);
        let mut fallback: Option<Vec3<T>> = None;
        for (i, a) in acc.iter().enumerate() {
            let k = a.norm();
            self.kappa.push(k);
            if k >= floor {
                let nn = *a / k;
                fallback = Some(nn);
                self.normal.push(nn);
            } else {
                self.frame_flags[i] = true;
                let t = self.tangent[i];
                let guess = fallback.unwrap_or_else(|| any_perpendicular(t));
                let nn = guess - t * guess.dot(t);
                let nn = if nn.norm() > T::c(1e-6) {
                    nn / nn.norm()
                } else {
                    any_perpendicular(t)
                };
                self.normal.push(nn);
            }
        }
        let binormal: Vec<Vec3<T>> = (0..n)
            .map(|i| self.tangent[i].cross(self.normal[i]))
            .collect();
        let db = stencil::diff(&binormal, self.h, self.topology.is_periodic());
        let tau = (0..n)
            .map(|i| {
                if self.frame_flags[i] {
                    T::zero()
                } else {
                    -(db[i] / self.omega[i]).dot(self.normal[i])
                }
            })
            .collect();
        self.binormal = Some(binormal);
        self.tau = Some(tau);
    }

    /// Rebuilds the curve sampled at uniform arclength.
    pub fn resample_arclength(&self) -> Result<Self> {
        let n = self.len();
        // cumulative length at each sample, trapezoid between neighbours
        let mut cum = vec![T::zero(); n + 1];
        for i in 0..n {
            let next = if i + 1 < n {
                self.omega[i + 1]
            } else {
                self.omega[0]
            };
            cum[i + 1] = cum[i] + (self.omega[i] + next) * T::half() * self.h;
        }
        let total = if self.topology.is_periodic() {
            cum[n]
        } else {
            cum[n - 1]
        };
        let targets: Vec<T> = (0..n)
            .map(|i| {
                if self.topology.is_periodic() {
                    total * from_usize::<T>(i) / from_usize::<T>(n)
                } else {
                    total * from_usize::<T>(i) / from_usize::<T>(n - 1)
                }
            })
            .collect();
        let mut pts = Vec::with_capacity(n);
        let mut seg = 0usize;
        for &target in &targets {
            while seg + 1 < cum.len() - 1 && cum[seg + 1] < target {
                seg += 1;
            }
            let span = cum[seg + 1] - cum[seg];
            let frac = if span > T::zero() {
                (target - cum[seg]) / span
            } else {
                T::zero()
            };
            let x = from_usize::<T>(seg) + frac;
            let p = if self.topology.is_periodic() {
                self.periodic_point_at(x)
            } else {
                stencil::lagrange4(&self.points, x)
            };
            pts.push(self.space.retract(p));
        }
        Self::compute(self.space, pts, self.topology, self.config)
    }

    fn periodic_point_at(&self, x: T) -> Vec3<T> {
        let n = self.len() as isize;
        let i = x.floor().to_isize().unwrap_or(0);
        let u = x - T::c(i as f64);
        let shift = match self.topology {
            Topology::Screw(s) => s,
            _ => Vec3::zero(),
        };
        let at =
            |j: isize| self.points[j.rem_euclid(n) as usize] + shift * T::c(j.div_euclid(n) as f64);
        let window = [at(i - 1), at(i), at(i + 1), at(i + 2)];
        stencil::lagrange4(&window, u + T::one())
    }

    #[inline]
    pub fn space(&self) -> &SpaceForm<T> {
        &self.space
    }

    #[inline]
    pub fn topology(&self) -> &Topology<T> {
        &self.topology
    }

    #[inline]
    pub fn is_closed(&self) -> bool {
        matches!(self.topology, Topology::Closed)
    }

    pub fn screw_shift(&self) -> Option<Vec3<T>> {
        match self.topology {
            Topology::Screw(s) => Some(s),
            _ => None,
        }
    }

    pub fn config(&self) -> &CurveConfig {
        &self.config
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid spacing in `t`.
    #[inline]
    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn t_grid(&self) -> &[T] {
        &self.t
    }

    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    pub fn tangent(&self) -> &[Vec3<T>] {
        &self.tangent
    }

    pub fn normal(&self) -> &[Vec3<T>] {
        &self.normal
    }

    pub fn kappa(&self) -> &[T] {
        &self.kappa
    }

    pub fn binormal(&self) -> Option<&[Vec3<T>]> {
        self.binormal.as_deref()
    }

    pub fn tau(&self) -> Option<&[T]> {
        self.tau.as_deref()
    }

    /// Samples where the 3D Frenet frame is undefined (`κ < κ_floor`).
    pub fn frame_flags(&self) -> &[bool] {
        &self.frame_flags
    }

    /// True when both curves share space, topology and sample count.
    pub fn same_grid(&self, other: &Self) -> bool {
        self.space == other.space && self.topology == other.topology && self.len() == other.len()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::GridMismatch(format!(
                "field has {len} samples, curve has {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Arclength derivative of scalar samples.
    pub fn d_theta(&self, values: &[T]) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        let d = stencil::diff(values, self.h, self.topology.is_periodic());
        Ok(d.iter().zip(&self.omega).map(|(d, w)| *d / *w).collect())
    }

    /// Arclength derivative of ambient vector samples, without projection.
    pub fn d_theta_vec(&self, values: &[Vec3<T>]) -> Result<Vec<Vec3<T>>> {
        self.check_len(values.len())?;
        let d = stencil::diff(values, self.h, self.topology.is_periodic());
        Ok(d.iter().zip(&self.omega).map(|(d, w)| *d / *w).collect())
    }

    /// Covariant derivative `∇_T h` of a tangent field.
    pub fn cov_d_t(&self, field: &TangentField<T>) -> Result<TangentField<T>> {
        let d = self.d_theta_vec(&field.values)?;
        Ok(TangentField {
            values: d
                .iter()
                .zip(&self.points)
                .map(|(v, p)| self.space.project_unchecked(*p, *v))
                .collect(),
        })
    }

    /// `∫ f dθ = ∫ f ω dt` by the trapezoid rule.
    pub fn integrate(&self, f: &[T]) -> Result<T> {
        self.check_len(f.len())?;
        let w = self.topology.quadrature_weights(self.len());
        Ok(f.iter()
            .zip(&self.omega)
            .zip(&w)
            .map(|((f, om), w)| *f * *om * *w)
            .sum())
    }

    /// Length of the curve.
    pub fn length(&self) -> T {
        let ones = vec![T::one(); self.len()];
        self.integrate(&ones).expect("same grid")
    }

    /// Metric `g` between vectors at sample `i`.
    #[inline]
    pub fn g(&self, a: Vec3<T>, b: Vec3<T>) -> T {
        self.space.inner(a, b)
    }

    /// Arclength-weighted mean of the points.
    pub fn centroid(&self) -> Vec3<T> {
        let w = self.topology.quadrature_weights(self.len());
        let mut acc = Vec3::zero();
        let mut total = T::zero();
        for ((p, om), w) in self.points.iter().zip(&self.omega).zip(&w) {
            acc += *p * (*om * *w);
            total += *om * *w;
        }
        acc / total
    }

    /// Largest normal component among the cached tangents, and frame defects.
    pub fn frame_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..self.len() {
            if self.frame_flags[i] {
                continue;
            }
            let t = self.tangent[i];
            let nn = self.normal[i];
            d = d
                .max((self.g(t, t) - T::one()).abs())
                .max((self.g(nn, nn) - T::one()).abs())
                .max(self.g(t, nn).abs());
            if let Some(b) = &self.binormal {
                let b = b[i];
                d = d
                    .max((b.dot(b) - T::one()).abs())
                    .max(b.dot(t).abs())
                    .max(b.dot(nn).abs())
                    .max((t.cross(nn).dot(b) - T::one()).abs());
            }
        }
        d
    }
}

fn any_perpendicular<T: Real>(t: Vec3<T>) -> Vec3<T> {
    let axis = if t.x.abs() < T::c(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let p = axis - t * axis.dot(t);
    p / p.norm()
}

/// A vector field along a curve, tangent to the model at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField<T> {
    values: Vec<Vec3<T>>,
}

impl<T: Real> TangentField<T> {
    /// Wraps `values`, rejecting samples that are not tangent.
    pub fn new(curve: &DiscreteCurve<T>, values: Vec<Vec3<T>>) -> Result<Self> {
        curve.check_len(values.len())?;
        let tol = T::tol(curve.config.tangency_tol);
        for (i, (p, v)) in curve.points.iter().zip(&values).enumerate() {
            let r = curve.space.tangency_residual(*p, *v);
            if r > tol {
                return Err(Error::NotTangent {
                    index: i,
                    residual: r.to_f64_lossy(),
                });
            }
        }
        Ok(Self { values })
    }

    /// Projects arbitrary ambient vectors onto the tangent planes.
    pub fn projected(curve: &DiscreteCurve<T>, values: Vec<Vec3<T>>) -> Result<Self> {
        curve.check_len(values.len())?;
        Ok(Self {
            values: values
                .iter()
                .zip(&curve.points)
                .map(|(v, p)| curve.space.project_unchecked(*p, *v))
                .collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![Vec3::zero(); n],
        }
    }

    pub fn values(&self) -> &[Vec3<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise `g(self, other)` along `curve`.
    pub fn dot(&self, curve: &DiscreteCurve<T>, other: &Self) -> Vec<T> {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| curve.g(*a, *b))
            .collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            values: self.values.iter().map(|v| *v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::sup_norm;
    use std::f64::consts::PI;

    fn circle(n: usize, r: f64) -> DiscreteCurve<f64> {
        let pts = Topology::<f64>::Closed
            .grid(n)
            .iter()
            .map(|t| Vec3::new(r * t.cos(), r * t.sin(), 0.0))
            .collect();
        build_curve(SpaceForm::plane(), pts, true).unwrap()
    }

    #[test]
    fn plane_circle_has_unit_curvature() {
        let c = circle(256, 1.0);
        for k in c.kappa() {
            assert!((k - 1.0).abs() < 1e-3);
        }
        // counterclockwise circle: N points to the center
        let n0 = c.normal()[0];
        assert!((n0.x + 1.0).abs() < 1e-12);
    }

    #[test]
    fn great_circle_is_geodesic() {
        let s = SpaceForm::sphere(1.0).unwrap();
        let pts = Topology::<f64>::Closed
            .grid(256)
            .iter()
            .map(|t| Vec3::new(t.cos(), 0.0, t.sin()))
            .collect();
        let c = build_curve(s, pts, true).unwrap();
        assert!(sup_norm(c.kappa()) < 1e-3);
    }

    #[test]
    fn helix_curvature_and_torsion() {
        let n = 512;
        // one turn of (cos t, sin t, t) sampled on the open grid
        let pts = Topology::<f64>::Open
            .grid(n)
            .iter()
            .map(|u| {
                let t = 2.0 * PI * u;
                Vec3::new(t.cos(), t.sin(), t)
            })
            .collect();
        let c = build_curve(SpaceForm::euclidean3(), pts, false).unwrap();
        for (k, tau) in c.kappa().iter().zip(c.tau().unwrap()) {
            assert!((k - 0.5).abs() < 1e-3, "kappa {k}");
            assert!((tau - 0.5).abs() < 1e-3, "tau {tau}");
        }
        assert!(c.frame_defect() < 1e-8);
    }

    #[test]
    fn straight_segment_flags_frame_and_reports_zero_torsion() {
        let pts = (0..16)
            .map(|i| Vec3::new(i as f64, 0.5 * i as f64, 0.0))
            .collect();
        let c = build_curve(SpaceForm::euclidean3(), pts, false).unwrap();
        assert!(c.frame_flags().iter().all(|f| *f));
        assert!(c.tau().unwrap().iter().all(|t| *t == 0.0));
    }

    #[test]
    fn rejects_short_and_degenerate_input() {
        let pts: Vec<Vec3<f64>> = (0..5).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        assert!(matches!(
            build_curve(SpaceForm::plane(), pts, false),
            Err(Error::Precondition(_))
        ));
        let mut pts: Vec<Vec3<f64>> = (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        pts[4] = pts[3];
        assert!(matches!(
            build_curve(SpaceForm::plane(), pts, false),
            Err(Error::Immersion { .. })
        ));
        let pts: Vec<Vec3<f64>> = (0..10).map(|i| Vec3::new(i as f64, 0.0, 1.0)).collect();
        let s = SpaceForm::sphere(1.0).unwrap();
        assert!(matches!(
            build_curve(s, pts, false),
            Err(Error::OffSurface { .. })
        ));
    }

    #[test]
    fn d_theta_examples() {
        let c = circle(256, 1.0);
        let ones = vec![3.0; 256];
        assert!(sup_norm(&c.d_theta(&ones).unwrap()) < 1e-12);
        assert!(sup_norm(&c.d_theta(c.kappa()).unwrap()) < 1e-10);
        let s: Vec<f64> = c.t_grid().iter().map(|t| t.sin()).collect();
        let d = c.d_theta(&s).unwrap();
        for (t, d) in c.t_grid().iter().zip(&d) {
            assert!((d - t.cos()).abs() < 4e-4);
        }
        assert!(matches!(c.d_theta(&[1.0; 10]), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn covariant_derivative_examples() {
        let c = circle(256, 1.0);
        let t = TangentField::new(&c, c.tangent().to_vec()).unwrap();
        let dt = c.cov_d_t(&t).unwrap();
        for (a, b) in dt.values().iter().zip(c.normal()) {
            assert!((*a - *b).norm() < 1e-3);
        }
        let nf = TangentField::new(&c, c.normal().to_vec()).unwrap();
        let dn = c.cov_d_t(&nf).unwrap();
        for (a, b) in dn.values().iter().zip(c.tangent()) {
            assert!((*a + *b).norm() < 1e-3);
        }

        let pts = (0..20)
            .map(|i| Vec3::new(0.1 * i as f64, -0.2 * i as f64, 0.0))
            .collect();
        let seg = build_curve(SpaceForm::plane(), pts, false).unwrap();
        let par = TangentField::new(&seg, vec![Vec3::new(0.3, 0.7, 0.0); 20]).unwrap();
        let d = seg.cov_d_t(&par).unwrap();
        assert!(d.values().iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn sphere_tangent_fields_are_checked() {
        let s = SpaceForm::sphere(1.0).unwrap();
        let pts = Topology::<f64>::Closed
            .grid(32)
            .iter()
            .map(|t| Vec3::new(0.6 * t.cos(), 0.6 * t.sin(), 0.8))
            .collect();
        let c = build_curve(s, pts, true).unwrap();
        let radial: Vec<Vec3<f64>> = c.points().to_vec();
        assert!(matches!(
            TangentField::new(&c, radial.clone()),
            Err(Error::NotTangent { .. })
        ));
        let p = TangentField::projected(&c, radial).unwrap();
        assert!(p.values().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn length_examples() {
        assert!((circle(256, 1.0).length() - 2.0 * PI).abs() < 1e-6);

        let s = SpaceForm::sphere(1.0).unwrap();
        let f = s.default_polar_frame();
        let r = 0.8;
        let pts = Topology::<f64>::Closed
            .grid(256)
            .iter()
            .map(|&t| s.exp_polar(&f, r, t).unwrap())
            .collect();
        let c = build_curve(s, pts, true).unwrap();
        assert!((c.length() - 2.0 * PI * r.sin()).abs() < 1e-5);

        let pts = Topology::<f64>::Open
            .grid(64)
            .iter()
            .map(|u| Vec3::new(3.0 * u, 0.0, 0.0))
            .collect();
        let seg = build_curve(SpaceForm::plane(), pts, false).unwrap();
        assert!((seg.length() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn latitude_circle_curvature_is_cot_r() {
        let s = SpaceForm::sphere(1.0).unwrap();
        let f = s.default_polar_frame();
        let r = 0.6;
        let pts = Topology::<f64>::Closed
            .grid(128)
            .iter()
            .map(|&t| s.exp_polar(&f, r, t).unwrap())
            .collect();
        let c = build_curve(s, pts, true).unwrap();
        for k in c.kappa() {
            assert!((k - 1.0 / r.tan()).abs() < 1e-6);
        }
    }

    #[test]
    fn arclength_resampling_equalizes_speed() {
        let n = 256;
        let pts = Topology::<f64>::Closed
            .grid(n)
            .iter()
            .map(|t| {
                let u = t + 0.3 * t.sin();
                Vec3::new(u.cos(), u.sin(), 0.0)
            })
            .collect();
        let cfg = CurveConfig {
            resample_arclength: true,
            ..CurveConfig::default()
        };
        let c = DiscreteCurve::build(SpaceForm::plane(), pts, Topology::Closed, cfg).unwrap();
        let w = c.omega();
        let spread = crate::scalar::relative_spread(w);
        assert!(spread < 1e-3, "spread {spread}");
        assert!((c.length() - 2.0 * PI).abs() < 1e-4);
    }
}
