use std::fmt;

use super::fit::{quadratic, weighted_line};
use super::DegreeDistribution;
use crate::error::{Error, Result};

/// Fewest support points accepted above `k_min`.
pub const MIN_TAIL_POINTS: usize = 10;
/// Empirical ccdf values resting on fewer samples than this are dropped from the regression.
pub const MIN_TAIL_COUNT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    CcdfRegression,
    Hill,
}

impl fmt::Display for TailMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailMethod::CcdfRegression => "ccdf-regression",
            TailMethod::Hill => "hill",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub tau_hat: f64,
    pub k_min: u64,
    pub stderr: f64,
    pub method: TailMethod,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub regression: TailFit,
    pub hill: Option<TailFit>,
    /// Change in log-log slope across the fitted range, from a quadratic fit.
    pub curvature: f64,
    pub power_law_plausible: bool,
}

/// Smallest k with `q_k <= 0.1`.
pub fn default_k_min(dist: &DegreeDistribution) -> u64 {
    (0..=dist.max_degree())
        .find(|&k| dist.ccdf(k) <= 0.1)
        .unwrap_or(dist.max_degree())
}

fn tail_points(dist: &DegreeDistribution, k_min: u64, k_max: Option<u64>) -> Vec<(f64, f64)> {
    let n = dist.sample_count() as f64;
    dist.support()
        .filter(|&(k, _, q)| {
            k >= k_min.max(1)
                && k_max.map_or(true, |m| k <= m)
                && (n == 0.0 || n * q >= MIN_TAIL_COUNT)
        })
        .map(|(k, _, q)| ((k as f64).ln(), q.ln()))
        .collect()
}

/// Least-squares slope of `ln q_k` on `ln k`; `tau_hat = 1 − slope`.
pub fn ccdf_regression(
    dist: &DegreeDistribution,
    k_min: u64,
    k_max: Option<u64>,
) -> Result<TailFit> {
    let pts = tail_points(dist, k_min, k_max);
    if pts.len() < MIN_TAIL_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} support points above k_min = {k_min}, need {MIN_TAIL_POINTS}",
            pts.len()
        )));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let fit = weighted_line(&x, &y, None);
    Ok(TailFit {
        tau_hat: 1.0 - fit.slope,
        k_min,
        stderr: fit.slope_stderr,
        method: TailMethod::CcdfRegression,
        points: x.len(),
    })
}

/// Discrete Hill estimator with the half-integer shift; needs a sampled distribution.
pub fn hill_estimate(dist: &DegreeDistribution, k_min: u64) -> Result<TailFit> {
    let n = dist.sample_count() as f64;
    if n == 0.0 || k_min < 1 {
        return Err(Error::InsufficientData(
            "Hill estimator needs samples and k_min >= 1".into(),
        ));
    }
    let shift = k_min as f64 - 0.5;
    let tail = n * dist.ccdf(k_min);
    let log_sum: f64 = dist
        .support()
        .filter(|&(k, _, _)| k >= k_min)
        .map(|(k, p, _)| n * p * (k as f64 / shift).ln())
        .sum();
    if tail < MIN_TAIL_COUNT || log_sum <= 0.0 {
        return Err(Error::InsufficientData(format!(
            "only {tail} samples at or above k_min = {k_min}"
        )));
    }
    let alpha = tail / log_sum;
    Ok(TailFit {
        tau_hat: 1.0 + alpha,
        k_min,
        stderr: alpha / tail.sqrt(),
        method: TailMethod::Hill,
        points: tail as usize,
    })
}

/// Both estimators plus a curvature diagnostic. `k_min = None` uses [`default_k_min`].
pub fn estimate_tail_exponent(dist: &DegreeDistribution, k_min: Option<u64>) -> Result<TailReport> {
    let k_min = k_min.unwrap_or_else(|| default_k_min(dist));
    let regression = ccdf_regression(dist, k_min, None)?;
    let hill = hill_estimate(dist, k_min).ok();
    let (x, y): (Vec<f64>, Vec<f64>) = tail_points(dist, k_min, None).into_iter().unzip();
    let c = quadratic(&x, &y);
    let span = x.last().unwrap() - x[0];
    let curvature = 2.0 * c[2] * span;
    let slope = 1.0 - regression.tau_hat;
    let power_law_plausible = curvature.abs() <= (0.25 * slope.abs()).max(0.5);
    Ok(TailReport {
        regression,
        hill,
        curvature,
        power_law_plausible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::geometric_pmf;

    fn exact_power_ccdf(alpha: f64, k_hi: u64, scale: f64) -> DegreeDistribution {
        let q = |k: u64| scale * (k as f64).powf(-alpha);
        let mut pmf = vec![0.0; k_hi as usize + 1];
        for k in 1..k_hi {
            pmf[k as usize] = q(k) - q(k + 1);
        }
        pmf[k_hi as usize] = q(k_hi);
        pmf[0] = 1.0 - scale;
        DegreeDistribution::from_pmf(pmf).unwrap()
    }

    #[test]
    fn recovers_exact_power_tail() {
        let d = exact_power_ccdf(2.5, 1000, 1.0);
        let r = estimate_tail_exponent(&d, Some(1)).unwrap();
        assert!((r.regression.tau_hat - 3.5).abs() < 1e-6, "{:?}", r);
        assert!(r.power_law_plausible);
        assert!(r.hill.is_none());
    }

    #[test]
    fn slope_only_under_rescaling() {
        let a = ccdf_regression(&exact_power_ccdf(1.7, 500, 1.0), 3, None).unwrap();
        let b = ccdf_regression(&exact_power_ccdf(1.7, 500, 0.3), 3, None).unwrap();
        assert!((a.tau_hat - b.tau_hat).abs() < 1e-10);
    }

    #[test]
    fn geometric_is_flagged() {
        let d = DegreeDistribution::from_pmf(geometric_pmf(0.5, 60)).unwrap();
        let r = estimate_tail_exponent(&d, Some(1)).unwrap();
        assert!(!r.power_law_plausible, "{r:?}");
    }

    #[test]
    fn too_few_points() {
        let d = DegreeDistribution::from_samples([1, 2, 3]).unwrap();
        assert!(estimate_tail_exponent(&d, Some(1)).is_err());
    }
}
