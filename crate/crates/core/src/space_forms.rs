//! Constant-curvature ambient spaces.
//!
//! Each model is realized as a submanifold of a flat ambient space so that
//! covariant derivatives reduce to ambient derivatives followed by
//! [`SpaceForm::tangent_project`]:
//!
//! * `Plane2D` is the `z = 0` plane (two serialized coordinates),
//! * `Sphere2D` is the sphere of radius `1/√K` centered at the origin,
//! * `Hyperbolic2D` is the upper sheet of `x² + y² − z² = −1/|K|` with the
//!   Minkowski product of signature (+, +, −),
//! * `Euclidean3D` is plain three-space.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vector::Vec3;

/// Points must satisfy the model equation to this relative accuracy.
pub const SURFACE_TOL: f64 = 1e-9;
/// Orthonormality tolerance for [`PolarFrame`].
pub const FRAME_TOL: f64 = 1e-12;
/// Below this value of `|K| r²` the polar profile switches to its series.
pub const SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Plane2D,
    Sphere2D,
    Hyperbolic2D,
    Euclidean3D,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Plane2D => "plane2d",
            Model::Sphere2D => "sphere2d",
            Model::Hyperbolic2D => "hyperbolic2d",
            Model::Euclidean3D => "euclidean3d",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "plane2d" => Some(Model::Plane2D),
            "sphere2d" => Some(Model::Sphere2D),
            "hyperbolic2d" => Some(Model::Hyperbolic2D),
            "euclidean3d" => Some(Model::Euclidean3D),
            _ => None,
        }
    }
}

/// Ambient space of constant sectional curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm<T> {
    model: Model,
    curvature: T,
}

impl<T: Real> SpaceForm<T> {
    pub fn new(model: Model, curvature: T) -> Result<Self> {
        let ok = match model {
            Model::Plane2D | Model::Euclidean3D => curvature == T::zero(),
            Model::Sphere2D => curvature > T::zero(),
            Model::Hyperbolic2D => curvature < T::zero(),
        };
        if !ok || !curvature.is_finite() {
            return Err(Error::Domain(format!(
                "curvature {} does not match model {}",
                curvature,
                model.name()
            )));
        }
        Ok(Self { model, curvature })
    }

    pub fn plane() -> Self {
        Self {
            model: Model::Plane2D,
            curvature: T::zero(),
        }
    }

    pub fn euclidean3() -> Self {
        Self {
            model: Model::Euclidean3D,
            curvature: T::zero(),
        }
    }

    pub fn sphere(curvature: T) -> Result<Self> {
        Self::new(Model::Sphere2D, curvature)
    }

    pub fn hyperbolic(curvature: T) -> Result<Self> {
        Self::new(Model::Hyperbolic2D, curvature)
    }

    /// The surface model matching the sign of `curvature`.
    pub fn surface_with_curvature(curvature: T) -> Result<Self> {
        if curvature > T::zero() {
            Self::sphere(curvature)
        } else if curvature < T::zero() {
            Self::hyperbolic(curvature)
        } else if curvature == T::zero() {
            Ok(Self::plane())
        } else {
            Err(Error::Domain(format!(
                "curvature {curvature} is not a number"
            )))
        }
    }

    #[inline]
    pub fn model(&self) -> Model {
        self.model
    }

    #[inline]
    pub fn curvature(&self) -> T {
        self.curvature
    }

    /// Number of serialized coordinates per point.
    pub fn ambient_dim(&self) -> usize {
        match self.model {
            Model::Plane2D => 2,
            _ => 3,
        }
    }

    /// Intrinsic dimension of the model.
    pub fn dim(&self) -> usize {
        match self.model {
            Model::Euclidean3D => 3,
            _ => 2,
        }
    }

    #[inline]
    pub fn is_surface(&self) -> bool {
        self.dim() == 2
    }

    /// Radius `1/√|K|` of the curved models; infinite for flat ones.
    pub fn radius(&self) -> T {
        if self.curvature == T::zero() {
            T::infinity()
        } else {
            T::one() / self.curvature.abs().sqrt()
        }
    }

    /// Riemannian metric `g` on tangent vectors, in ambient coordinates.
    #[inline]
    pub fn inner(&self, a: Vec3<T>, b: Vec3<T>) -> T {
        match self.model {
            Model::Hyperbolic2D => a.minkowski_dot(b),
            _ => a.dot(b),
        }
    }

    #[inline]
    pub fn norm(&self, v: Vec3<T>) -> T {
        self.inner(v, v).max(T::zero()).sqrt()
    }

    /// Relative violation of the model equation at `p`.
    pub fn surface_residual(&self, p: Vec3<T>) -> T {
        match self.model {
            Model::Plane2D => p.z.abs(),
            Model::Euclidean3D => T::zero(),
            Model::Sphere2D => (p.dot(p) * self.curvature - T::one()).abs(),
            Model::Hyperbolic2D => {
                let r = (p.minkowski_dot(p) * self.curvature - T::one()).abs();
                if p.z > T::zero() {
                    r
                } else {
                    r.max(T::one())
                }
            }
        }
    }

    pub fn check_on_surface(&self, p: Vec3<T>) -> Result<()> {
        let r = self.surface_residual(p);
        if r <= T::tol(SURFACE_TOL) {
            Ok(())
        } else {
            Err(Error::OffSurface {
                residual: r.to_f64_lossy(),
            })
        }
    }

    /// Outward unit normal of the surface models at `p`, timelike on the
    /// hyperboloid. `None` for `Euclidean3D`.
    pub fn surface_normal(&self, p: Vec3<T>) -> Option<Vec3<T>> {
        match self.model {
            Model::Plane2D => Some(Vec3::new(T::zero(), T::zero(), T::one())),
            Model::Sphere2D | Model::Hyperbolic2D => Some(p / self.radius()),
            Model::Euclidean3D => None,
        }
    }

    /// Tangential part of `v` at `p`, without the on-surface check.
    #[inline]
    pub fn project_unchecked(&self, p: Vec3<T>, v: Vec3<T>) -> Vec3<T> {
        match self.model {
            Model::Plane2D => Vec3::new(v.x, v.y, T::zero()),
            Model::Euclidean3D => v,
            Model::Sphere2D => v - p * (v.dot(p) * self.curvature),
            // <p, p> = 1/K on the hyperboloid
            Model::Hyperbolic2D => v - p * (v.minkowski_dot(p) * self.curvature),
        }
    }

    /// Component of `v` tangent to the model at `p`.
    pub fn tangent_project(&self, p: Vec3<T>, v: Vec3<T>) -> Result<Vec3<T>> {
        self.check_on_surface(p)?;
        Ok(self.project_unchecked(p, v))
    }

    /// Normal component of `v` at `p`, relative to `1 + |v|`.
    pub fn tangency_residual(&self, p: Vec3<T>, v: Vec3<T>) -> T {
        let off = v - self.project_unchecked(p, v);
        off.max_abs() / (T::one() + v.max_abs())
    }

    /// Rotation by +π/2 in the oriented tangent plane of a surface model.
    pub fn rotate_tangent(&self, p: Vec3<T>, v: Vec3<T>) -> Option<Vec3<T>> {
        let n = self.surface_normal(p)?;
        let c = n.cross(v);
        Some(match self.model {
            Model::Hyperbolic2D => Vec3::new(c.x, c.y, -c.z),
            _ => c,
        })
    }

    /// Pulls a point back onto the model along the radial direction.
    pub fn retract(&self, p: Vec3<T>) -> Vec3<T> {
        match self.model {
            Model::Plane2D => Vec3::new(p.x, p.y, T::zero()),
            Model::Euclidean3D => p,
            Model::Sphere2D => p * (self.radius() / p.norm()),
            Model::Hyperbolic2D => {
                let q = -p.minkowski_dot(p);
                if q > T::zero() && p.z > T::zero() {
                    p * (self.radius() / q.sqrt())
                } else {
                    p
                }
            }
        }
    }

    fn check_radius(&self, r: T) -> Result<()> {
        if !(r > T::zero()) {
            return Err(Error::Domain(format!("polar radius {r} must be positive")));
        }
        if self.curvature > T::zero() && r >= T::PI() * self.radius() {
            return Err(Error::Domain(format!(
                "polar radius {r} reaches the cut locus π/√K = {}",
                T::PI() * self.radius()
            )));
        }
        Ok(())
    }

    /// Length element `ω(r)` of geodesic polar coordinates and `∂ω/∂r`.
    pub fn omega_profile(&self, r: T) -> Result<(T, T)> {
        self.check_radius(r)?;
        let k = self.curvature;
        if (k * r * r).abs() < T::c(SERIES_THRESHOLD) {
            let x = k * r * r;
            let omega = r * (T::one() - x / T::c(6.0) + x * x / T::c(120.0));
            let omega_r = T::one() - x / T::two() + x * x / T::c(24.0);
            return Ok((omega, omega_r));
        }
        let s = k.abs().sqrt();
        Ok(if k > T::zero() {
            ((s * r).sin() / s, (s * r).cos())
        } else {
            ((s * r).sinh() / s, (s * r).cosh())
        })
    }

    /// Second radial derivative of `ω`, from the same closed form.
    pub fn omega_rr(&self, r: T) -> Result<T> {
        self.check_radius(r)?;
        let k = self.curvature;
        if (k * r * r).abs() < T::c(SERIES_THRESHOLD) {
            let x = k * r * r;
            return Ok(-k * r * (T::one() - x / T::c(6.0) + x * x / T::c(120.0)));
        }
        let s = k.abs().sqrt();
        Ok(if k > T::zero() {
            -s * (s * r).sin()
        } else {
            s * (s * r).sinh()
        })
    }

    /// `ω_rr + K ω`, which vanishes for every model.
    pub fn jacobi_residual(&self, r: T) -> Result<T> {
        let (omega, _) = self.omega_profile(r)?;
        Ok(self.omega_rr(r)? + self.curvature * omega)
    }

    /// Riemannian exponential of `r (cos t e1 + sin t e2)` at the frame center.
    pub fn exp_polar(&self, frame: &PolarFrame<T>, r: T, t: T) -> Result<Vec3<T>> {
        self.check_radius(r)?;
        let u = frame.e1 * t.cos() + frame.e2 * t.sin();
        let p = frame.center;
        Ok(match self.model {
            Model::Plane2D | Model::Euclidean3D => p + u * r,
            Model::Sphere2D => {
                let big_r = self.radius();
                p * (r / big_r).cos() + u * (big_r * (r / big_r).sin())
            }
            Model::Hyperbolic2D => {
                let big_r = self.radius();
                p * (r / big_r).cosh() + u * (big_r * (r / big_r).sinh())
            }
        })
    }

    /// The standard polar frame: origin, pole or apex with `e1 = x̂`, `e2 = ŷ`.
    pub fn default_polar_frame(&self) -> PolarFrame<T> {
        let z = T::zero();
        let center = match self.model {
            Model::Plane2D | Model::Euclidean3D => Vec3::zero(),
            Model::Sphere2D | Model::Hyperbolic2D => Vec3::new(z, z, self.radius()),
        };
        PolarFrame {
            center,
            e1: Vec3::new(T::one(), z, z),
            e2: Vec3::new(z, T::one(), z),
        }
    }
}

/// Center point with an orthonormal pair of tangent vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFrame<T> {
    pub center: Vec3<T>,
    pub e1: Vec3<T>,
    pub e2: Vec3<T>,
}

impl<T: Real> PolarFrame<T> {
    pub fn new(space: &SpaceForm<T>, center: Vec3<T>, e1: Vec3<T>, e2: Vec3<T>) -> Result<Self> {
        space.check_on_surface(center)?;
        let tol = T::tol(FRAME_TOL);
        let defect = (space.inner(e1, e1) - T::one())
            .abs()
            .max((space.inner(e2, e2) - T::one()).abs())
            .max(space.inner(e1, e2).abs())
            .max(space.tangency_residual(center, e1))
            .max(space.tangency_residual(center, e2));
        if defect > tol {
            return Err(Error::FrameNotOrthonormal {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(Self { center, e1, e2 })
    }
}
