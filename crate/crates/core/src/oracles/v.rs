use rand::Rng;

use super::pool::{PoolMeta, PoolTarget, SamplePool};
use super::w::{iterate, PoolConfig};
use crate::dist::{sample_exp, DegreeLaw, DegreeSampler};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Default denominator cutoff for the series representation.
pub const DEFAULT_SERIES_CUTOFF: f64 = 1e7;
const MAX_SERIES_TERMS: usize = 100_000_000;

fn infinite_variance_offspring(degree: &DegreeLaw) -> Result<DegreeSampler> {
    let tau = match degree {
        DegreeLaw::PowerLaw(pl) => pl.tau,
        _ => {
            return Err(Error::invalid(format!(
                "{degree}: V needs a power law with tau in (2, 3)"
            )))
        }
    };
    if !(tau > 2.0 && tau < 3.0) {
        return Err(Error::invalid(format!(
            "V is defined for tau in (2, 3), got {tau}"
        )));
    }
    if degree.min_degree() < 2 {
        return Err(Error::invalid("V needs degrees >= 2"));
    }
    Ok(degree.size_biased()?.law.sampler())
}

/// Law of `E + V_J` with `J` uniform on a frozen pool, and exact draws of the
/// minimum of N independent copies by inversion of its cdf.
pub(crate) struct ShiftedMin {
    v: Vec<f64>,
    /// `P_c = Σ_{j<c} e^{v_j − v_0}`
    prefix: Vec<f64>,
    /// cdf of `E + V_J` at each `v_c`
    at_knots: Vec<f64>,
}

impl ShiftedMin {
    pub(crate) fn new(pool: &[f64]) -> Self {
        let mut v = pool.to_vec();
        v.sort_unstable_by(f64::total_cmp);
        let m = v.len();
        let mut prefix = Vec::with_capacity(m + 1);
        prefix.push(0.0);
        for x in &v {
            prefix.push(prefix.last().unwrap() + (x - v[0]).exp());
        }
        let at_knots = (0..m)
            .map(|c| (c as f64 - (-(v[c] - v[0])).exp() * prefix[c]) / m as f64)
            .collect();
        ShiftedMin {
            v,
            prefix,
            at_knots,
        }
    }

    /// Quantile of `E + V_J` at `p ∈ (0, 1)`.
    fn quantile(&self, p: f64) -> f64 {
        let m = self.v.len();
        let c = self.at_knots.partition_point(|&f| f < p).max(1);
        self.v[0] + (self.prefix[c] / (c as f64 - m as f64 * p)).ln()
    }

    /// `min_{i ≤ n} (E_i + V_{J_i})`.
    pub(crate) fn sample_min<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        // 1 − (1 − u)^{1/n}
        let p = -((-u).ln_1p() / n as f64).exp_m1();
        self.quantile(p)
    }
}

/// Population dynamics on `V = min_{i ≤ D*−1}(E_i + V_i)` from `V ≡ 0`.
pub fn solve_v_min_recursion(
    degree: &DegreeLaw,
    cfg: &PoolConfig,
    stream: RngStream,
) -> Result<SamplePool> {
    let offspring = infinite_variance_offspring(degree)?;
    let m = cfg.size;
    let it = iterate(vec![0.0; m], cfg, stream, |old, rng| {
        let law = ShiftedMin::new(old);
        Ok((0..m)
            .map(|_| law.sample_min(offspring.sample(rng) - 1, rng))
            .collect())
    })?;
    let meta = PoolMeta {
        degree_law: Some(degree.to_string()),
        weight_law: Some("exp".into()),
        seed: stream.seed,
        converged: it.converged,
        last_ks: it.last_ks,
        ..Default::default()
    };
    SamplePool::new(PoolTarget::V, it.samples, it.sweeps, meta)
}

/// One draw of `Σ_i E_i / (1 + Σ_{j ≤ i}(D*_j − 2))`, stopped once the denominator exceeds `cutoff`.
pub fn sample_v_series<R: Rng + ?Sized>(
    offspring: &DegreeSampler,
    cutoff: f64,
    rng: &mut R,
) -> Result<f64> {
    let mut denom = 1.0;
    let mut v = 0.0;
    for _ in 0..MAX_SERIES_TERMS {
        denom += (offspring.sample(rng) - 2) as f64;
        v += sample_exp(rng) / denom;
        if denom > cutoff {
            return Ok(v);
        }
    }
    Err(Error::Convergence(format!(
        "V series did not reach denominator {cutoff}"
    )))
}

/// Pool of independent series draws.
pub fn solve_v_series(
    degree: &DegreeLaw,
    size: usize,
    cutoff: f64,
    stream: RngStream,
) -> Result<SamplePool> {
    let offspring = infinite_variance_offspring(degree)?;
    if !(cutoff > 1.0) {
        return Err(Error::invalid(format!(
            "series cutoff must exceed 1, got {cutoff}"
        )));
    }
    let mut rng = stream.rng();
    let samples = (0..size)
        .map(|_| sample_v_series(&offspring, cutoff, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let meta = PoolMeta {
        degree_law: Some(degree.to_string()),
        weight_law: Some("exp".into()),
        seed: stream.seed,
        converged: true,
        ..Default::default()
    };
    SamplePool::new(PoolTarget::V, samples, 0, meta)
}
