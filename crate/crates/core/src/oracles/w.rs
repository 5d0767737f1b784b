use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, LogNormal};

use super::malthusian::lambda_s;
use super::pool::{PoolMeta, PoolTarget, SamplePool};
use crate::analysis::ks_two_sample;
use crate::dist::{sample_exp, DegreeLaw, WeightLaw};
use crate::error::{Error, Result};
use crate::rng::{RngStream, StreamRng};

/// Population-dynamics controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolConfig {
    pub size: usize,
    pub max_sweeps: usize,
    pub min_sweeps: usize,
    /// Stop once successive sweeps differ by less than this KS distance.
    pub ks_tol: f64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            size: 100_000,
            max_sweeps: 200,
            min_sweeps: 5,
            ks_tol: 0.005,
        }
    }
}

impl PoolConfig {
    pub fn with_size(size: usize) -> Self {
        PoolConfig {
            size,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size < 2 || self.max_sweeps == 0 || self.min_sweeps > self.max_sweeps {
            return Err(Error::invalid(format!("bad pool config {self:?}")));
        }
        Ok(())
    }
}

/// Truncation threshold for the infinite sum in the complete-graph recursion.
pub const DEFAULT_TRUNCATION: f64 = 1e-8;

/// Hands out pool indices so that every member is used equally often:
/// consecutive blocks of `m` draws form random permutations.
pub(crate) struct BalancedIndex {
    perm: Vec<u32>,
    pos: usize,
}

impl BalancedIndex {
    pub(crate) fn new(m: usize) -> Self {
        BalancedIndex {
            perm: (0..m as u32).collect(),
            pos: m,
        }
    }

    #[inline]
    pub(crate) fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        if self.pos == self.perm.len() {
            self.perm.shuffle(rng);
            self.pos = 0;
        }
        self.pos += 1;
        self.perm[self.pos - 1] as usize
    }
}

/// `count` stratified uniforms in random order.
pub(crate) fn stratified_uniforms<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let mut u: Vec<f64> = (0..count)
        .map(|i| (i as f64 + rng.random::<f64>()) / count as f64)
        .collect();
    u.shuffle(rng);
    u
}

pub(crate) struct Iterated {
    pub samples: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    pub last_ks: f64,
}

pub(crate) fn iterate<F>(
    init: Vec<f64>,
    cfg: &PoolConfig,
    stream: RngStream,
    mut sweep: F,
) -> Result<Iterated>
where
    F: FnMut(&[f64], &mut StreamRng) -> Result<Vec<f64>>,
{
    let mut pool = init;
    let mut last_ks = 1.0;
    for g in 1..=cfg.max_sweeps {
        let mut rng = stream.substream(g as u64).rng();
        let next = sweep(&pool, &mut rng)?;
        last_ks = ks_two_sample(&pool, &next)?;
        pool = next;
        if g >= cfg.min_sweeps && last_ks < cfg.ks_tol {
            return Ok(Iterated {
                samples: pool,
                sweeps: g,
                converged: true,
                last_ks,
            });
        }
    }
    Ok(Iterated {
        samples: pool,
        sweeps: cfg.max_sweeps,
        converged: false,
        last_ks,
    })
}

/// Mean-one log-normal start with the given variance (`W ≡ 1` when it is not finite).
fn initial_pool(size: usize, variance: Option<f64>, stream: RngStream) -> Vec<f64> {
    match variance {
        Some(v) if v > 0.0 && v.is_finite() => {
            let sigma2 = v.ln_1p();
            let law = LogNormal::new(-0.5 * sigma2, sigma2.sqrt()).expect("finite parameters");
            let mut rng = stream.rng();
            (0..size).map(|_| law.sample(&mut rng)).collect()
        }
        _ => vec![1.0; size],
    }
}

/// Sweeps needed for an error contracting by `rate` per sweep to fall below `target`.
fn sweeps_for(rate: f64, target: f64) -> usize {
    if rate > 0.0 && rate < 1.0 {
        (target.ln() / rate.ln()).ceil() as usize
    } else {
        0
    }
}

fn check_mean(pool: &SamplePool) -> Result<()> {
    let mean = pool.mean();
    if (mean - 1.0).abs() > 0.1 {
        return Err(Error::Convergence(format!(
            "{} pool mean drifted to {mean}",
            pool.target()
        )));
    }
    Ok(())
}

/// Population dynamics for `W = Σ_{i ≤ D*−1} e^{−λY_i} W_i`, started from a mean-one
/// log-normal pool with the fixed point's variance when that is finite, else from `W ≡ 1`.
pub fn solve_w_cm(
    degree: &DegreeLaw,
    weight: &WeightLaw,
    lambda: f64,
    cfg: &PoolConfig,
    stream: RngStream,
) -> Result<SamplePool> {
    cfg.validate()?;
    let sb = degree.size_biased()?;
    if sb.infinite_mean {
        return Err(Error::invalid(format!(
            "{degree}: size-biased law has infinite mean, use the V pool"
        )));
    }
    if !(sb.nu > 1.0) {
        return Err(Error::NoMalthusian { nu: sb.nu });
    }
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let offspring = sb.law.sampler();
    // second and third moments of W contract by ν E[e^{-2λY}] and ν E[e^{-3λY}] per sweep
    let q2 = sb.nu * weight.laplace(2.0 * lambda);
    let q3 = sb.nu * weight.laplace(3.0 * lambda);
    let factorial2 = match &sb.law {
        DegreeLaw::Fixed(r) => Some((*r as f64 - 1.0) * (*r as f64 - 2.0)),
        DegreeLaw::Explicit(p) => Some(
            p.iter()
                .map(|(k, q)| q * (k as f64 - 1.0) * (k as f64 - 2.0))
                .sum(),
        ),
        _ => None,
    };
    let a = weight.laplace(lambda);
    let variance = factorial2
        .filter(|_| q2 < 1.0)
        .map(|f2| f2 * a * a / (1.0 - q2) - 1.0);
    let needed = match variance {
        Some(_) => sweeps_for(q3, 3e-3),
        None => sweeps_for(q2, 1e-4),
    };
    let cfg = PoolConfig {
        min_sweeps: cfg.min_sweeps.max(needed).min(cfg.max_sweeps),
        ..*cfg
    };
    let m = cfg.size;
    let mut slots = BalancedIndex::new(m);
    let mut counts = vec![0u32; m];
    let init = initial_pool(m, variance, stream.labeled("init"));
    let it = iterate(init, &cfg, stream, |old, rng| {
        let mut total = 0usize;
        for c in counts.iter_mut() {
            *c = (offspring.sample(rng) - 1) as u32;
            total += *c as usize;
        }
        let u = stratified_uniforms(total, rng);
        let mut s = 0;
        let mut next = Vec::with_capacity(m);
        for &c in &counts {
            let mut w = 0.0;
            for _ in 0..c {
                w += (-lambda * weight.quantile(u[s])).exp() * old[slots.next(rng)];
                s += 1;
            }
            next.push(w);
        }
        Ok(next)
    })?;
    let meta = PoolMeta {
        lambda: Some(lambda),
        degree_law: Some(degree.to_string()),
        weight_law: Some(weight.to_string()),
        seed: stream.seed,
        converged: it.converged,
        last_ks: it.last_ks,
        ..Default::default()
    };
    let pool = SamplePool::new(PoolTarget::WConfigurationModel, it.samples, it.sweeps, meta)?;
    check_mean(&pool)?;
    Ok(pool)
}

/// Population dynamics for `W = Σ_{i ≥ 1} e^{−λ_s X_i} W_i`, the sum cut at the first
/// coefficient below `truncation` times the coefficients already summed.
pub fn solve_w_complete(
    s: f64,
    truncation: f64,
    cfg: &PoolConfig,
    stream: RngStream,
) -> Result<SamplePool> {
    cfg.validate()?;
    let lambda = lambda_s(s)?;
    if !(truncation > 0.0 && truncation < 1.0) {
        return Err(Error::invalid(format!(
            "truncation must lie in (0, 1), got {truncation}"
        )));
    }
    // E Σ e^{-jλ_s X_i} = j^{-1/s}: the variance is c/(1-c) with c = 2^{-1/s}, and third
    // moments contract by 3^{-1/s} per sweep
    let c = 2f64.powf(-1.0 / s);
    let cfg = PoolConfig {
        min_sweeps: cfg
            .min_sweeps
            .max(sweeps_for(3f64.powf(-1.0 / s), 3e-3))
            .min(cfg.max_sweeps),
        ..*cfg
    };
    let power = Power::new(s);
    let m = cfg.size;
    let mut slots = BalancedIndex::new(m);
    let init = initial_pool(m, Some(c / (1.0 - c)), stream.labeled("init"));
    let it = iterate(init, &cfg, stream, |old, rng| {
        let first = stratified_uniforms(m, rng);
        let mut next = Vec::with_capacity(m);
        for &u in &first {
            let mut g = -(-u).ln_1p();
            let mut w = 0.0;
            let mut mass = 0.0;
            loop {
                let c = (-lambda * power.apply(g)).exp();
                if c < truncation * mass || c == 0.0 {
                    break;
                }
                mass += c;
                w += c * old[slots.next(rng)];
                g += sample_exp(rng);
            }
            next.push(w);
        }
        Ok(next)
    })?;
    let meta = PoolMeta {
        s: Some(s),
        lambda: Some(lambda),
        seed: stream.seed,
        converged: it.converged,
        last_ks: it.last_ks,
        ..Default::default()
    };
    let pool = SamplePool::new(PoolTarget::WComplete, it.samples, it.sweeps, meta)?;
    check_mean(&pool)?;
    Ok(pool)
}

#[derive(Clone, Copy)]
pub(crate) enum Power {
    One,
    Half,
    Two,
    General(f64),
}

impl Power {
    pub(crate) fn new(s: f64) -> Self {
        match s {
            1.0 => Power::One,
            0.5 => Power::Half,
            2.0 => Power::Two,
            _ => Power::General(s),
        }
    }

    #[inline]
    pub(crate) fn apply(self, x: f64) -> f64 {
        match self {
            Power::One => x,
            Power::Half => x.sqrt(),
            Power::Two => x * x,
            Power::General(s) => x.powf(s),
        }
    }
}

/// `E[e^{-uW}] = (1 + (r−2)u/(r−1))^{−(r−1)/(r−2)}` for r-regular degrees and exponential weights.
pub fn w_regular_exponential_laplace(r: u64, u: f64) -> f64 {
    let r = r as f64;
    (1.0 + (r - 2.0) / (r - 1.0) * u).powf(-(r - 1.0) / (r - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_index_uses_everyone_once_per_block() {
        let mut b = BalancedIndex::new(10);
        let mut rng = RngStream::new(1, 1).rng();
        let mut seen: Vec<usize> = (0..10).map(|_| b.next(&mut rng)).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn stratified_uniforms_cover_strata() {
        let mut rng = RngStream::new(1, 2).rng();
        let mut u = stratified_uniforms(50, &mut rng);
        u.sort_by(f64::total_cmp);
        for (i, x) in u.iter().enumerate() {
            assert!(*x >= i as f64 / 50.0 && *x < (i + 1) as f64 / 50.0);
        }
    }

    #[test]
    fn small_pools_have_unit_mean() {
        let cfg = PoolConfig::with_size(20_000);
        let w = solve_w_complete(1.0, DEFAULT_TRUNCATION, &cfg, RngStream::new(3, 0)).unwrap();
        assert!((w.mean() - 1.0).abs() < 0.03, "{}", w.mean());
        let cm = solve_w_cm(
            &DegreeLaw::fixed(3).unwrap(),
            &WeightLaw::Exponential,
            1.0,
            &cfg,
            RngStream::new(3, 1),
        )
        .unwrap();
        assert!((cm.mean() - 1.0).abs() < 0.03, "{}", cm.mean());
        assert!(solve_w_cm(
            &DegreeLaw::fixed(2).unwrap(),
            &WeightLaw::Exponential,
            1.0,
            &cfg,
            RngStream::new(3, 1)
        )
        .is_err());
    }
}
