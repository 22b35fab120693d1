//! Diagnostics report for a stored path: speed, horizontality and the
//! variation formulas against their finite-difference oracles.

use serde::Serialize;

use crate::error::Result;
use crate::scalar::{relative_spread, sup_norm, Real};
use crate::sobolev_metric::CurvePath;
use crate::variations::{verify_variation, Quantity};

/// Variation formula against central differences with steps `Δs` and `2Δs`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FormulaCheck {
    /// Sup error per interior sample `j = 1, …, m−2` (step `Δs`).
    pub sup_error: Vec<f64>,
    /// Largest error over `j = 2, …, m−3` with step `Δs`.
    pub max_error: f64,
    /// The same with step `2Δs`.
    pub max_error_double_step: Option<f64>,
    /// `max_error_double_step / max_error`, about 4 for smooth paths.
    pub convergence_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

impl FormulaCheck {
    fn unavailable(msg: String) -> Self {
        Self {
            sup_error: Vec::new(),
            max_error: f64::NAN,
            max_error_double_step: None,
            convergence_factor: None,
            unavailable: Some(msg),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Variations {
    pub omega: FormulaCheck,
    pub kappa: FormulaCheck,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub model: String,
    pub curvature: f64,
    pub s_samples: usize,
    pub t_samples: usize,
    /// `∫ν ds`.
    pub distance: f64,
    /// `∫ν² ds`.
    pub energy: f64,
    pub speed: Vec<f64>,
    /// `(max ν − min ν) / mean ν`.
    pub speed_drift: f64,
    pub horizontality_sup: Vec<f64>,
    pub horizontality_max: f64,
    /// Largest tangential velocity component over all samples.
    pub tangential_max: f64,
    /// `sup |∂_θ(ρ²κ)|` per sample; `null` where the velocity is not normal.
    pub rho_kappa_sup: Vec<Option<f64>>,
    pub variations: Variations,
}

fn f<T: Real>(v: T) -> f64 {
    v.to_f64_lossy()
}

fn formula_check<T: Real>(path: &CurvePath<T>, q: Quantity) -> FormulaCheck {
    let m = path.len();
    let single: Result<Vec<f64>> = (1..m - 1)
        .map(|j| verify_variation(path, q, j, 1).map(|r| f(r.abs_error)))
        .collect();
    let sup_error = match single {
        Ok(v) => v,
        Err(e) => return FormulaCheck::unavailable(e.to_string()),
    };
    if m < 5 {
        let max_error = sup_error.iter().copied().fold(0.0, f64::max);
        return FormulaCheck {
            sup_error,
            max_error,
            max_error_double_step: None,
            convergence_factor: None,
            unavailable: None,
        };
    }
    let max_error = sup_error[1..m - 3].iter().copied().fold(0.0, f64::max);
    let double: Result<Vec<f64>> = (2..m - 2)
        .map(|j| verify_variation(path, q, j, 2).map(|r| f(r.abs_error)))
        .collect();
    let (max_error_double_step, convergence_factor) = match double {
        Ok(v) => {
            let d = v.iter().copied().fold(0.0, f64::max);
            (Some(d), Some(d / max_error))
        }
        Err(_) => (None, None),
    };
    FormulaCheck {
        sup_error,
        max_error,
        max_error_double_step,
        convergence_factor,
        unavailable: None,
    }
}

/// Runs every diagnostic on `path`.
pub fn check_path<T: Real>(path: &CurvePath<T>) -> Result<CheckReport> {
    let diag = path.diagnostics()?;
    let m = path.len();
    let speed: Vec<f64> = diag.speed.iter().map(|v| f(*v)).collect();
    let horizontality_sup: Vec<f64> = diag.horizontality_defect.iter().map(|v| f(*v)).collect();
    let tangential_max = diag
        .tangential
        .iter()
        .map(|t| f(sup_norm(t)))
        .fold(0.0, f64::max);
    let rho_kappa_sup = (0..m)
        .map(|j| path.rho_kappa_defect(j).ok().map(|d| f(sup_norm(&d))))
        .collect();
    let c0 = path.curve(0);
    Ok(CheckReport {
        model: c0.space().model().name().to_string(),
        curvature: f(c0.space().curvature()),
        s_samples: m,
        t_samples: path.t_samples(),
        distance: f(path.length()?),
        energy: f(path.energy()?),
        speed_drift: f(relative_spread(&diag.speed)),
        speed,
        horizontality_max: horizontality_sup.iter().copied().fold(0.0, f64::max),
        horizontality_sup,
        tangential_max,
        rho_kappa_sup,
        variations: Variations {
            omega: formula_check(path, Quantity::Omega),
            kappa: formula_check(path, Quantity::Kappa),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn concentric_report() {
        let path = families::plane_concentric::<f64>(17, 128, |s| 1.0 + s).unwrap();
        let r = check_path(&path).unwrap();
        assert_eq!(r.s_samples, 17);
        assert!(r.horizontality_max < 1e-10);
        assert!(r.rho_kappa_sup.iter().all(|v| v.unwrap() < 1e-8));
        let k = &r.variations.kappa;
        assert!(k.max_error < 1e-2);
        let factor = k.convergence_factor.unwrap();
        assert!((factor - 4.0).abs() < 0.3, "{factor}");
        let text = crate::io::to_json_string(&r).unwrap();
        assert!(text.contains("\"horizontality_sup\""));
    }
}
