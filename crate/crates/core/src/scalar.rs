//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Tolerances throughout the crate are written for double precision and
/// pass through [`Real::tol`], which clamps them to a small multiple of
/// machine epsilon so the same code stays meaningful in single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance, never tighter than 64 ulps at one.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::c(x).max(Self::epsilon() * Self::c(64.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::c(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::c(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts a count to the scalar type.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable")
}

/// Supremum norm of a slice; zero for an empty slice.
pub fn sup_norm<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

/// `(max - min) / |mean|` of a slice of samples.
pub fn relative_spread<T: Real>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let mean = values.iter().copied().sum::<T>() / from_usize(values.len());
    if mean == T::zero() {
        return if hi == lo { T::zero() } else { T::infinity() };
    }
    (hi - lo) / mean.abs()
}
