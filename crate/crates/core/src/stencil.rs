//! Finite-difference stencils and uniform-grid helpers.
//!
//! First derivatives use the fourth-order five-point central stencil, with
//! fourth-order one-sided stencils at the two ends of open grids.

use std::ops::{Add, Mul, Sub};

use crate::scalar::{from_usize, Real};
use crate::vector::Vec3;

/// Parameter-domain topology of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology<T> {
    /// `t ∈ [0, 2π)` with periodic wrap.
    Closed,
    /// `t ∈ [0, 1]`, endpoints included.
    Open,
    /// `t ∈ [0, 2π)` where the point after the last sample is the first one
    /// translated by the shift (coaxial helices). Vector and scalar fields
    /// stay periodic.
    Screw(Vec3<T>),
}

impl<T: Real> Topology<T> {
    #[inline]
    pub fn is_periodic(&self) -> bool {
        !matches!(self, Topology::Open)
    }

    /// Grid spacing for `n` samples.
    pub fn spacing(&self, n: usize) -> T {
        if self.is_periodic() {
            T::two() * T::PI() / from_usize(n)
        } else {
            T::one() / from_usize(n - 1)
        }
    }

    pub fn grid(&self, n: usize) -> Vec<T> {
        let h = self.spacing(n);
        (0..n).map(|i| from_usize::<T>(i) * h).collect()
    }

    /// Trapezoid weights (times spacing) for integrating over the grid.
    pub fn quadrature_weights(&self, n: usize) -> Vec<T> {
        let h = self.spacing(n);
        let mut w = vec![h; n];
        if !self.is_periodic() {
            w[0] = h * T::half();
            w[n - 1] = h * T::half();
        }
        w
    }
}

/// Values that can be differentiated: scalars and ambient vectors.
pub trait Sample<T>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
}
impl<T: Real> Sample<T> for T {}
impl<T: Real> Sample<T> for Vec3<T> {}

/// Fourth-order derivative of samples with spacing `h`.
pub fn diff<T: Real, V: Sample<T>>(values: &[V], h: T, periodic: bool) -> Vec<V> {
    let n = values.len();
    assert!(n >= 5, "need at least five samples to differentiate");
    let inv = T::one() / (T::c(12.0) * h);
    let c8 = T::c(8.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if periodic {
            let at = |k: isize| values[(i as isize + k).rem_euclid(n as isize) as usize];
            (at(-2) - at(2)) + (at(1) - at(-1)) * c8
        } else {
            open_stencil(values, i, n)
        };
        out.push(d * inv);
    }
    out
}

/// Derivative of curve points, honoring a screw shift across the seam.
pub fn diff_points<T: Real>(points: &[Vec3<T>], h: T, topology: &Topology<T>) -> Vec<Vec3<T>> {
    match topology {
        Topology::Open | Topology::Closed => diff(points, h, topology.is_periodic()),
        Topology::Screw(shift) => {
            let n = points.len() as isize;
            let at = |j: isize| {
                let wraps = j.div_euclid(n);
                points[j.rem_euclid(n) as usize] + *shift * T::c(wraps as f64)
            };
            let inv = T::one() / (T::c(12.0) * h);
            (0..n)
                .map(|i| ((at(i - 2) - at(i + 2)) + (at(i + 1) - at(i - 1)) * T::c(8.0)) * inv)
                .collect()
        }
    }
}

fn open_stencil<T: Real, V: Sample<T>>(f: &[V], i: usize, n: usize) -> V {
    let c = |x: f64| T::c(x);
    // coefficients for f'(x_i) * 12h at the first two and last two samples
    if i == 0 {
        f[0] * c(-25.0) + f[1] * c(48.0) + f[2] * c(-36.0) + f[3] * c(16.0) + f[4] * c(-3.0)
    } else if i == 1 {
        f[0] * c(-3.0) + f[1] * c(-10.0) + f[2] * c(18.0) + f[3] * c(-6.0) + f[4] * c(1.0)
    } else if i == n - 1 {
        f[n - 1] * c(25.0)
            + f[n - 2] * c(-48.0)
            + f[n - 3] * c(36.0)
            + f[n - 4] * c(-16.0)
            + f[n - 5] * c(3.0)
    } else if i == n - 2 {
        f[n - 1] * c(3.0)
            + f[n - 2] * c(10.0)
            + f[n - 3] * c(-18.0)
            + f[n - 4] * c(6.0)
            + f[n - 5] * c(-1.0)
    } else {
        (f[i - 2] - f[i + 2]) + (f[i + 1] - f[i - 1]) * c(8.0)
    }
}

/// Second-order central difference with one-sided second-order ends.
pub fn diff2nd<T: Real, V: Sample<T>>(values: &[V], h: T, j: usize) -> V {
    let n = values.len();
    assert!(n >= 3);
    let inv = T::one() / (T::two() * h);
    if j == 0 {
        (values[1] * T::c(4.0) - values[0] * T::c(3.0) - values[2]) * inv
    } else if j == n - 1 {
        (values[n - 1] * T::c(3.0) - values[n - 2] * T::c(4.0) + values[n - 3]) * inv
    } else {
        (values[j + 1] - values[j - 1]) * inv
    }
}

/// Cubic Lagrange interpolation of uniformly spaced samples at fractional
/// index `x ∈ [0, n - 1]`.
pub fn lagrange4<T: Real, V: Sample<T>>(values: &[V], x: T) -> V {
    let n = values.len();
    assert!(n >= 4);
    let last = from_usize::<T>(n - 1);
    let x = x.max(T::zero()).min(last);
    let base = x.floor().to_usize().unwrap_or(0).clamp(1, n - 3) - 1;
    let u = x - from_usize(base);
    let one = T::one();
    let two = T::two();
    let three = T::c(3.0);
    let six = T::c(6.0);
    let w0 = -(u - one) * (u - two) * (u - three) / six;
    let w1 = u * (u - two) * (u - three) / two;
    let w2 = -u * (u - one) * (u - three) / two;
    let w3 = u * (u - one) * (u - two) / six;
    values[base] * w0 + values[base + 1] * w1 + values[base + 2] * w2 + values[base + 3] * w3
}
