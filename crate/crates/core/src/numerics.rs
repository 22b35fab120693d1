//! Adaptive Gauss–Kronrod quadrature and a safeguarded monotone root finder.

use crate::error::{Error, Result};
use crate::scalar::Real;

// Kronrod 15-point nodes (non-negative half), Kronrod and embedded Gauss
// 7-point weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let fc = f(center);
    let mut kronrod = fc * T::c(WGK[7]);
    let mut gauss = fc * T::c(WG[3]);
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * T::c(x);
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * T::c(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * T::c(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive G7–K15 quadrature of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol |I|)`.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: T = pieces.iter().map(|p| p.2).sum();
        let error: T = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "integrand is not finite on [{a}, {b}]"
            )));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Numeric(format!(
                "quadrature on [{a}, {b}] did not reach tolerance after {max_intervals} intervals (error {error})"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1 .3
                    .partial_cmp(&y.1 .3)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = (lo + hi) * T::half();
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Solves `g(x) = target` for a nondecreasing `g` on `[lo, hi]`, using Newton
/// steps with derivative `dg` and bisection whenever a step leaves the
/// bracket.
pub fn solve_monotone<T: Real, G, D>(
    g: G,
    dg: D,
    target: T,
    mut lo: T,
    mut hi: T,
    x_tol: T,
    max_iter: usize,
) -> Result<T>
where
    G: Fn(T) -> Result<T>,
    D: Fn(T) -> T,
{
    let g_lo = g(lo)? - target;
    let g_hi = g(hi)? - target;
    if g_lo > T::zero() || g_hi < T::zero() {
        return Err(Error::Numeric(format!(
            "target {target} is not bracketed by [{lo}, {hi}]"
        )));
    }
    if g_lo == T::zero() {
        return Ok(lo);
    }
    if g_hi == T::zero() {
        return Ok(hi);
    }
    let mut x = (lo + hi) * T::half();
    for _ in 0..max_iter {
        let r = g(x)? - target;
        if r == T::zero() {
            return Ok(x);
        }
        if r < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let slope = dg(x);
        let newton = x - r / slope;
        let next = if slope > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::half()
        };
        if (next - x).abs() <= x_tol * (T::one() + x.abs()) || hi - lo <= x_tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numeric(format!(
        "root finding for target {target} did not converge in {max_iter} iterations"
    )))
}

/// Natural cubic spline through `(x_i, y_i)` with strictly increasing nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    // second derivatives at the nodes
    m: Vec<T>,
}

impl<T: Real> NaturalSpline<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::Precondition(format!(
                "spline needs at least 2 matching nodes, got {} and {}",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition("spline nodes must increase".into()));
        }
        let mut m = vec![T::zero(); n];
        if n > 2 {
            // Thomas algorithm on the interior equations
            let k = n - 2;
            let mut diag = vec![T::zero(); k];
            let mut upper = vec![T::zero(); k];
            let mut rhs = vec![T::zero(); k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = T::two() * (h0 + h1);
                upper[i] = h1;
                rhs[i] = T::c(6.0) * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] = rhs[i] - w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn eval(&self, t: T) -> T {
        let n = self.x.len();
        let mut i = 0;
        while i + 2 < n && t > self.x[i + 1] {
            i += 1;
        }
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let six = T::c(6.0);
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / six
    }
}
