//! Variation formulas for the length element and curvature along a path,
//! the curvature-conservation identity, and finite-difference oracles.

use crate::discrete_curves::{DiscreteCurve, TangentField};
use crate::error::{Error, Result};
use crate::scalar::{sup_norm, Real};
use crate::sobolev_metric::{CurvePath, NORMALITY_TOL};

/// Geometric quantity whose `s`-variation is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Omega,
    Kappa,
}

/// Formula prediction against the finite-difference observation.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationReport<T> {
    pub predicted: Vec<T>,
    pub observed: Vec<T>,
    pub abs_error: T,
}

/// Predicted `ω′` with the normal-case cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaVariation<T> {
    /// `g(∇_T c′, T) ω` per sample.
    pub values: Vec<T>,
    /// `max |values + ρκω|`, when the sample is normal.
    pub normal_discrepancy: Option<T>,
}

/// `ω′ = g(∇_T c′, T) ω` at `s_j`.
pub fn predicted_omega_variation<T: Real>(
    path: &CurvePath<T>,
    j: usize,
) -> Result<OmegaVariation<T>> {
    let v = path.velocity(j)?;
    let c = path.curve(j);
    let dv = c.cov_d_t(&v)?;
    let values: Vec<T> = (0..c.len())
        .map(|i| c.g(dv.values()[i], c.tangent()[i]) * c.omega()[i])
        .collect();

    let tangential = sup_norm(&path.tangential_component(j)?);
    let normal_discrepancy = if tangential <= T::c(NORMALITY_TOL) {
        let rho = path.rho(j)?;
        Some(
            (0..c.len())
                .map(|i| (values[i] + rho[i] * c.kappa()[i] * c.omega()[i]).abs())
                .fold(T::zero(), T::max),
        )
    } else {
        None
    };
    Ok(OmegaVariation {
        values,
        normal_discrepancy,
    })
}

/// `κ′ = g(∇_T² c′, N) − 2κ g(∇_T c′, T) + K g(c′, N)` at `s_j`.
pub fn predicted_kappa_variation<T: Real>(path: &CurvePath<T>, j: usize) -> Result<Vec<T>> {
    let v = path.velocity(j)?;
    let c = path.curve(j);
    kappa_variation_of_field(c, &v)
}

/// Curvature variation of `curve` in the direction of the field `v`.
pub fn kappa_variation_of_field<T: Real>(
    c: &DiscreteCurve<T>,
    v: &TangentField<T>,
) -> Result<Vec<T>> {
    let k_amb = c.space().curvature();
    let d1 = c.cov_d_t(v)?;
    let d2 = c.cov_d_t(&d1)?;
    Ok((0..c.len())
        .map(|i| {
            let nn = c.normal()[i];
            c.g(d2.values()[i], nn) - T::two() * c.kappa()[i] * c.g(d1.values()[i], c.tangent()[i])
                + k_amb * c.g(v.values()[i], nn)
        })
        .collect())
}

/// Central difference `(q(s_{j+e}) − q(s_{j−e})) / (2 e Δs)` per sample.
pub fn fd_variation<T: Real>(
    path: &CurvePath<T>,
    quantity: Quantity,
    j: usize,
    eps_steps: usize,
) -> Result<Vec<T>> {
    let m = path.len();
    if eps_steps == 0 || j < eps_steps || j + eps_steps >= m {
        return Err(Error::Precondition(format!(
            "central difference with step {eps_steps} needs {eps_steps} <= j <= {}, got j = {j}",
            m.saturating_sub(eps_steps + 1)
        )));
    }
    let q = |c: &DiscreteCurve<T>| -> Vec<T> {
        match quantity {
            Quantity::Omega => c.omega().to_vec(),
            Quantity::Kappa => c.kappa().to_vec(),
        }
    };
    let hi = q(path.curve(j + eps_steps));
    let lo = q(path.curve(j - eps_steps));
    let denom = T::two() * T::c(eps_steps as f64) * path.ds();
    Ok(hi.iter().zip(&lo).map(|(a, b)| (*a - *b) / denom).collect())
}

/// Compares the formula for `quantity` with [`fd_variation`] at `s_j`.
pub fn verify_variation<T: Real>(
    path: &CurvePath<T>,
    quantity: Quantity,
    j: usize,
    eps_steps: usize,
) -> Result<VariationReport<T>> {
    let predicted = match quantity {
        Quantity::Omega => predicted_omega_variation(path, j)?.values,
        Quantity::Kappa => predicted_kappa_variation(path, j)?,
    };
    let observed = fd_variation(path, quantity, j, eps_steps)?;
    let abs_error = predicted
        .iter()
        .zip(&observed)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max);
    Ok(VariationReport {
        predicted,
        observed,
        abs_error,
    })
}

/// `2κκ_θθ − 3κ_θ² − 4κ²(κ² + K)` per sample; zero exactly when a normal
/// horizontal path keeps the curvature of this curve fixed.
pub fn curvature_conservation_residual<T: Real>(
    curve: &DiscreteCurve<T>,
    k_amb: T,
) -> Result<Vec<T>> {
    let kappa = curve.kappa();
    let k1 = curve.d_theta(kappa)?;
    let k2 = curve.d_theta(&k1)?;
    let four = T::c(4.0);
    Ok((0..curve.len())
        .map(|i| {
            let k = kappa[i];
            T::two() * k * k2[i] - T::c(3.0) * k1[i] * k1[i] - four * k * k * (k * k + k_amb)
        })
        .collect())
}

/// `α(s)` from `(ω′)² = α ω κ² / (1 + κ²)` at `t = 0`, with the relative
/// spread of the same expression over `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaReport<T> {
    pub alpha: Vec<T>,
    pub t_spread: Vec<T>,
}

/// Tolerance on `|κ_θ|` (relative to `1 + max |κ|`) for the parallel-tangent case.
pub const KAPPA_THETA_TOL: f64 = 1e-6;
/// Curvatures below this make `α` undefined.
pub const KAPPA_GUARD: f64 = 1e-8;

pub fn parallel_geodesic_alpha<T: Real>(path: &CurvePath<T>) -> Result<Vec<T>> {
    Ok(parallel_geodesic_alpha_report(path)?.alpha)
}

pub fn parallel_geodesic_alpha_report<T: Real>(path: &CurvePath<T>) -> Result<AlphaReport<T>> {
    let mut alpha = Vec::with_capacity(path.len());
    let mut t_spread = Vec::with_capacity(path.len());
    for j in 0..path.len() {
        let c = path.curve(j);
        let tangential = sup_norm(&path.tangential_component(j)?);
        if tangential > T::c(NORMALITY_TOL) {
            return Err(Error::NotNormal {
                index: j,
                tangential: tangential.to_f64_lossy(),
            });
        }
        let kappa = c.kappa();
        let kth = sup_norm(&c.d_theta(kappa)?);
        if kth > T::c(KAPPA_THETA_TOL) * (T::one() + sup_norm(kappa)) {
            return Err(Error::Precondition(format!(
                "curve {j} does not have constant curvature (sup |κ_θ| = {kth})"
            )));
        }
        let omega_var = predicted_omega_variation(path, j)?.values;
        let mut values = Vec::with_capacity(c.len());
        for i in 0..c.len() {
            let k = kappa[i];
            if k.abs() < T::c(KAPPA_GUARD) {
                return Err(Error::Degenerate(format!(
                    "curvature {k} at s-sample {j} is too small for α"
                )));
            }
            let dw = omega_var[i];
            values.push(dw * dw * (T::one() + k * k) / (c.omega()[i] * k * k));
        }
        t_spread.push(crate::scalar::relative_spread(&values));
        alpha.push(values[0]);
    }
    if alpha.iter().all(|a| *a <= T::c(1e-14)) {
        return Err(Error::Degenerate(
            "ω′ vanishes along the whole path; α is undefined".into(),
        ));
    }
    Ok(AlphaReport { alpha, t_spread })
}

/// The curve-shortening field `κ N`.
pub fn shortening_flow_field<T: Real>(curve: &DiscreteCurve<T>) -> TangentField<T> {
    let values = curve
        .normal()
        .iter()
        .zip(curve.kappa())
        .map(|(n, k)| *n * *k)
        .collect();
    TangentField::projected(curve, values).expect("same grid")
}
