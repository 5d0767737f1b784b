//! Statistics linking simulated trees to the limit laws.

mod distance;
mod fit;
mod rate;
mod recentering;
mod tail;

pub use distance::{ks_one_sample, ks_two_sample, tv_distance};
pub use rate::{rate_of_convergence_fit, GrowthModel, RateFit};
pub use recentering::{
    fit_location_offset, recentered_path_lengths, recentering_check, recentering_constant,
    recentering_oracle_samples, RecenteredSample, RecenteringConfig, RecenteringReport, MIN_PAIRS,
};
pub use tail::{
    ccdf_regression, default_k_min, estimate_tail_exponent, hill_estimate, TailFit, TailMethod,
    TailReport,
};

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Empirical (or exact) law on nonnegative integer degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    pmf: Vec<f64>,
    ccdf: Vec<f64>,
    /// Number of samples behind the pmf; 0 for an exact law.
    n: u64,
}

impl DegreeDistribution {
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::InsufficientData("no samples".into()));
        }
        let pmf = counts.iter().map(|&c| c as f64 / n as f64).collect();
        Ok(Self::build(pmf, n))
    }

    pub fn from_samples<I: IntoIterator<Item = u64>>(samples: I) -> Result<Self> {
        let mut counts: Vec<u64> = Vec::new();
        for k in samples {
            let k = k as usize;
            if k >= counts.len() {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        Self::from_counts(&counts)
    }

    /// Exact law from `p[k]`, k = 0, 1, ...; must sum to 1 within 1e-9.
    pub fn from_pmf(pmf: Vec<f64>) -> Result<Self> {
        let total: f64 = pmf.iter().sum();
        if pmf.iter().any(|p| !(*p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "pmf must be nonnegative and sum to 1, got {total}"
            )));
        }
        Ok(Self::build(pmf, 0))
    }

    fn build(mut pmf: Vec<f64>, n: u64) -> Self {
        while pmf.len() > 1 && pmf.last() == Some(&0.0) {
            pmf.pop();
        }
        let mut ccdf = vec![0.0; pmf.len()];
        let mut acc = 0.0;
        for k in (0..pmf.len()).rev() {
            acc += pmf[k];
            ccdf[k] = acc;
        }
        DegreeDistribution { pmf, ccdf, n }
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.pmf.get(k as usize).copied().unwrap_or(0.0)
    }

    /// `q_k = Σ_{j >= k} p_j`.
    pub fn ccdf(&self, k: u64) -> f64 {
        self.ccdf.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn pmf_slice(&self) -> &[f64] {
        &self.pmf
    }

    pub fn max_degree(&self) -> u64 {
        (self.pmf.len() - 1) as u64
    }

    pub fn min_degree(&self) -> u64 {
        self.pmf.iter().position(|&p| p > 0.0).unwrap_or(0) as u64
    }

    pub fn sample_count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// `(k, p_k, q_k)` for every k with `p_k > 0`.
    pub fn support(&self) -> impl Iterator<Item = (u64, f64, f64)> + '_ {
        self.pmf
            .iter()
            .zip(&self.ccdf)
            .enumerate()
            .filter(|(_, (p, _))| **p > 0.0)
            .map(|(k, (p, q))| (k as u64, *p, *q))
    }

    /// Law conditioned on degree >= 1 (drops unreached / isolated vertices).
    pub fn conditioned_positive(&self) -> Result<Self> {
        let mass = 1.0 - self.pmf[0];
        if !(mass > 0.0) {
            return Err(Error::InsufficientData("all mass at degree 0".into()));
        }
        let mut pmf: Vec<f64> = self.pmf.iter().map(|p| p / mass).collect();
        pmf[0] = 0.0;
        let n = (self.n as f64 * mass).round() as u64;
        Ok(Self::build(pmf, n))
    }

    pub fn tv_distance(&self, other: &DegreeDistribution) -> f64 {
        tv_distance(&self.pmf, &other.pmf).expect("nonempty pmfs")
    }

    /// CSV rows `k,p_k,q_k` over the support.
    pub fn to_csv_rows(&self, label: &str) -> String {
        let mut out = String::new();
        for (k, p, q) in self.support() {
            writeln!(out, "{label},{k},{p:.10e},{q:.10e}").expect("write to String");
        }
        out
    }
}

/// `Geometric(p)` on {1, 2, ...} tabulated up to `k_hi` (last cell absorbs the tail).
pub fn geometric_pmf(p: f64, k_hi: u64) -> Vec<f64> {
    let mut pmf = vec![0.0; k_hi as usize + 1];
    for k in 1..k_hi {
        pmf[k as usize] = (1.0 - p).powi(k as i32 - 1) * p;
    }
    pmf[k_hi as usize] = (1.0 - p).powi(k_hi as i32 - 1);
    pmf
}
