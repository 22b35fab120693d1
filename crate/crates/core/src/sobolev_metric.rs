//! First-order Sobolev metric on curve variations, path speed and energy,
//! and horizontality diagnostics.

use crate::discrete_curves::{DiscreteCurve, TangentField};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, sup_norm, Real};
use crate::vector::Vec3;

/// Largest tangential component for which a path sample counts as normal.
pub const NORMALITY_TOL: f64 = 1e-6;

/// An `s`-indexed family of curves on a shared `t`-grid, `s ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct CurvePath<T> {
    s_grid: Vec<T>,
    curves: Vec<DiscreteCurve<T>>,
}

impl<T: Real> CurvePath<T> {
    pub fn new(curves: Vec<DiscreteCurve<T>>) -> Result<Self> {
        let m = curves.len();
        if m < 3 {
            return Err(Error::Precondition(format!(
                "a path needs at least 3 curves, got {m}"
            )));
        }
        if let Some(j) = curves.iter().position(|c| !c.same_grid(&curves[0])) {
            return Err(Error::GridMismatch(format!(
                "curve {j} does not share the space, topology or t-grid of curve 0"
            )));
        }
        let ds = T::one() / from_usize::<T>(m - 1);
        let s_grid = (0..m).map(|j| from_usize::<T>(j) * ds).collect();
        Ok(Self { s_grid, curves })
    }

    pub fn s_grid(&self) -> &[T] {
        &self.s_grid
    }

    pub fn curves(&self) -> &[DiscreteCurve<T>] {
        &self.curves
    }

    pub fn curve(&self, j: usize) -> &DiscreteCurve<T> {
        &self.curves[j]
    }

    /// Number of `s`-samples.
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Number of `t`-samples per curve.
    pub fn t_samples(&self) -> usize {
        self.curves[0].len()
    }

    pub fn ds(&self) -> T {
        self.s_grid[1] - self.s_grid[0]
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.len() {
            return Err(Error::Precondition(format!(
                "s-index {j} out of range for {} samples",
                self.len()
            )));
        }
        Ok(())
    }

    /// Velocity `c′` at `s_j`: second-order differences in `s`, one-sided at
    /// the ends, projected onto the tangent planes of curve `j`.
    pub fn velocity(&self, j: usize) -> Result<TangentField<T>> {
        self.check_index(j)?;
        let m = self.len();
        let inv = T::one() / (T::two() * self.ds());
        let three = T::c(3.0);
        let four = T::c(4.0);
        let pts = |k: usize| self.curves[k].points();
        let raw: Vec<Vec3<T>> = (0..self.t_samples())
            .map(|i| {
                if j == 0 {
                    (pts(1)[i] * four - pts(0)[i] * three - pts(2)[i]) * inv
                } else if j == m - 1 {
                    (pts(m - 1)[i] * three - pts(m - 2)[i] * four + pts(m - 3)[i]) * inv
                } else {
                    (pts(j + 1)[i] - pts(j - 1)[i]) * inv
                }
            })
            .collect();
        TangentField::projected(&self.curves[j], raw)
    }

    /// Sobolev speed `ν(s_j)` for every sample.
    pub fn speed(&self) -> Result<Vec<T>> {
        (0..self.len())
            .map(|j| {
                let v = self.velocity(j)?;
                Ok(sobolev_inner(&self.curves[j], &v, &v)?
                    .max(T::zero())
                    .sqrt())
            })
            .collect()
    }

    /// Path energy `∫ ν² ds` (trapezoid in `s`).
    pub fn energy(&self) -> Result<T> {
        let nu = self.speed()?;
        Ok(trapezoid_s(
            &nu.iter().map(|v| *v * *v).collect::<Vec<_>>(),
            self.ds(),
        ))
    }

    /// Path length `∫ ν ds` (trapezoid in `s`).
    pub fn length(&self) -> Result<T> {
        Ok(trapezoid_s(&self.speed()?, self.ds()))
    }

    /// `g(η, T)` per `t`-sample at `s_j`, with `η = c′ − ∇_T² c′`.
    pub fn horizontality_defect(&self, j: usize) -> Result<Vec<T>> {
        let v = self.velocity(j)?;
        horizontality_defect_of_field(&self.curves[j], &v)
    }

    /// `g(c′, T)` per `t`-sample at `s_j`.
    pub fn tangential_component(&self, j: usize) -> Result<Vec<T>> {
        let v = self.velocity(j)?;
        let c = &self.curves[j];
        Ok(v.values()
            .iter()
            .zip(c.tangent())
            .map(|(a, b)| c.g(*a, *b))
            .collect())
    }

    /// Normal component `ρ = g(c′, N)` per `t`-sample at `s_j`.
    pub fn rho(&self, j: usize) -> Result<Vec<T>> {
        let v = self.velocity(j)?;
        let c = &self.curves[j];
        Ok(v.values()
            .iter()
            .zip(c.normal())
            .map(|(a, b)| c.g(*a, *b))
            .collect())
    }

    /// `∂_θ(ρ²κ)` at `s_j`. Only defined where the path is normal.
    pub fn rho_kappa_defect(&self, j: usize) -> Result<Vec<T>> {
        self.rho_kappa_defect_with_tol(j, NORMALITY_TOL)
    }

    pub fn rho_kappa_defect_with_tol(&self, j: usize, normality_tol: f64) -> Result<Vec<T>> {
        let tangential = sup_norm(&self.tangential_component(j)?);
        if tangential > T::c(normality_tol) {
            return Err(Error::NotNormal {
                index: j,
                tangential: tangential.to_f64_lossy(),
            });
        }
        let c = &self.curves[j];
        let q: Vec<T> = self
            .rho(j)?
            .iter()
            .zip(c.kappa())
            .map(|(r, k)| *r * *r * *k)
            .collect();
        c.d_theta(&q)
    }

    /// Speed, horizontality, normal and tangential components for every sample.
    pub fn diagnostics(&self) -> Result<PathDiagnostics<T>> {
        let m = self.len();
        let mut d = PathDiagnostics {
            speed: Vec::with_capacity(m),
            horizontality_defect: Vec::with_capacity(m),
            rho: Vec::with_capacity(m),
            tangential: Vec::with_capacity(m),
        };
        for j in 0..m {
            let c = &self.curves[j];
            let v = self.velocity(j)?;
            d.speed
                .push(sobolev_inner(c, &v, &v)?.max(T::zero()).sqrt());
            d.horizontality_defect
                .push(sup_norm(&horizontality_defect_of_field(c, &v)?));
            d.rho.push(
                v.values()
                    .iter()
                    .zip(c.normal())
                    .map(|(a, b)| c.g(*a, *b))
                    .collect(),
            );
            d.tangential.push(
                v.values()
                    .iter()
                    .zip(c.tangent())
                    .map(|(a, b)| c.g(*a, *b))
                    .collect(),
            );
        }
        Ok(d)
    }
}

/// Per-sample diagnostics of a path. `horizontality_defect` holds sup-norms.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDiagnostics<T> {
    pub speed: Vec<T>,
    pub horizontality_defect: Vec<T>,
    pub rho: Vec<Vec<T>>,
    pub tangential: Vec<Vec<T>>,
}

fn trapezoid_s<T: Real>(f: &[T], ds: T) -> T {
    let n = f.len();
    let inner: T = f[1..n - 1].iter().copied().sum();
    (inner + (f[0] + f[n - 1]) * T::half()) * ds
}

/// `G_c(h, k) = ∫ g(h, k) + g(∇_T h, ∇_T k) dθ`.
pub fn sobolev_inner<T: Real>(
    curve: &DiscreteCurve<T>,
    h: &TangentField<T>,
    k: &TangentField<T>,
) -> Result<T> {
    if h.len() != curve.len() || k.len() != curve.len() {
        return Err(Error::GridMismatch(format!(
            "fields of {} and {} samples on a curve of {}",
            h.len(),
            k.len(),
            curve.len()
        )));
    }
    let dh = curve.cov_d_t(h)?;
    let dk = curve.cov_d_t(k)?;
    let integrand: Vec<T> = (0..curve.len())
        .map(|i| curve.g(h.values()[i], k.values()[i]) + curve.g(dh.values()[i], dk.values()[i]))
        .collect();
    curve.integrate(&integrand)
}

/// The `L²` part `∫ g(h, k) dθ` alone.
pub fn l2_inner<T: Real>(
    curve: &DiscreteCurve<T>,
    h: &TangentField<T>,
    k: &TangentField<T>,
) -> Result<T> {
    curve.integrate(&h.dot(curve, k))
}

/// `g(η, T)` for a variation field `v` of `curve`, `η = v − ∇_T² v`.
pub fn horizontality_defect_of_field<T: Real>(
    curve: &DiscreteCurve<T>,
    v: &TangentField<T>,
) -> Result<Vec<T>> {
    let d1 = curve.cov_d_t(v)?;
    let d2 = curve.cov_d_t(&d1)?;
    Ok((0..curve.len())
        .map(|i| curve.g(v.values()[i] - d2.values()[i], curve.tangent()[i]))
        .collect())
}
