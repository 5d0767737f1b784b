use super::fit::weighted_line;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    /// `d ≈ C k^α`
    Power,
    /// `d ≈ a + b ln k`
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub power_prefactor: f64,
    pub log_intercept: f64,
    pub log_slope: f64,
    /// Sum of squared relative residuals of each model.
    pub power_residual: f64,
    pub log_residual: f64,
    pub preferred: GrowthModel,
}

/// Fit the mean deficit `E[k − D̂_k]` on a geometric k grid by a power law and by `a + b ln k`.
pub fn rate_of_convergence_fit(k_grid: &[f64], deficits: &[f64]) -> Result<RateFit> {
    if k_grid.len() != deficits.len() {
        return Err(Error::invalid("k grid and deficits differ in length"));
    }
    if k_grid.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} grid points, need 5",
            k_grid.len()
        )));
    }
    if let Some(d) = deficits.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::invalid(format!(
            "deficits must be positive, got {d}"
        )));
    }
    if k_grid.iter().any(|k| !(*k > 0.0)) {
        return Err(Error::invalid("k grid must be positive"));
    }
    let ratio = k_grid[1] / k_grid[0];
    let geometric = ratio > 1.0
        && k_grid
            .windows(2)
            .all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-6);
    if !geometric {
        return Err(Error::invalid("k grid must be geometric and increasing"));
    }

    let lk: Vec<f64> = k_grid.iter().map(|k| k.ln()).collect();
    let ld: Vec<f64> = deficits.iter().map(|d| d.ln()).collect();
    let pow = weighted_line(&lk, &ld, None);
    let weights: Vec<f64> = deficits.iter().map(|d| 1.0 / (d * d)).collect();
    let log = weighted_line(&lk, deficits, Some(&weights));

    let rel = |pred: &dyn Fn(f64) -> f64| -> f64 {
        lk.iter()
            .zip(deficits)
            .map(|(&x, &d)| ((d - pred(x)) / d).powi(2))
            .sum()
    };
    let power_residual = rel(&|x| (pow.intercept + pow.slope * x).exp());
    let log_residual = rel(&|x| log.intercept + log.slope * x);
    Ok(RateFit {
        alpha: pow.slope,
        alpha_stderr: pow.slope_stderr,
        power_prefactor: pow.intercept.exp(),
        log_intercept: log.intercept,
        log_slope: log.slope,
        power_residual,
        log_residual,
        preferred: if log_residual < power_residual {
            GrowthModel::Logarithmic
        } else {
            GrowthModel::Power
        },
    })
}
