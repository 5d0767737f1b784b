use rand::Rng;

use super::malthusian::lambda_s;
use super::pool::SamplePool;
use super::w::Power;
use crate::dist::{sample_exp, sample_gumbel, DegreeLaw, DegreeSampler, WeightLaw};
use crate::error::{Error, Result};

/// Stopping margin for the complete-graph point process.
pub const DEFAULT_MARGIN: f64 = 30.0;
/// Points generated per draw before giving up.
pub const DEFAULT_POINT_BUDGET: usize = 10_000_000;

fn log_pool(pool: &SamplePool) -> Vec<f64> {
    pool.samples()
        .iter()
        .map(|w| if *w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
        .collect()
}

#[inline]
fn pick<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> f64 {
    values[rng.random_range(0..values.len())]
}

/// `1 + #{i : a_i + b_i < M}` with `M = max_i (a_i − b_i)`; 0 when `M = −∞`.
fn count_children(a: &[f64], b: &[f64]) -> (u64, f64) {
    let m = a
        .iter()
        .zip(b)
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return (0, m);
    }
    let children = a.iter().zip(b).filter(|(a, b)| *a + *b < m).count();
    (1 + children as u64, m)
}

/// Limiting tree degree on the configuration model, finite-variance degrees:
/// `D̂ = 1 + Σ_{i ≤ D} 1{Λ_i + log W_i + λY_i < M}`, `M = max_i(Λ_i + log W_i − λY_i)`.
///
/// Returns 0 when every `W_i` is 0 (the vertex is outside the giant component).
pub struct FiniteVarianceSampler {
    degree: DegreeSampler,
    weight: WeightLaw,
    lambda: f64,
    log_w: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FiniteVarianceSampler {
    pub fn new(
        degree: &DegreeLaw,
        weight: WeightLaw,
        lambda: f64,
        w_pool: &SamplePool,
    ) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::invalid(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(FiniteVarianceSampler {
            degree: degree.sampler(),
            weight,
            lambda,
            log_w: log_pool(w_pool),
            a: Vec::new(),
            b: Vec::new(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        let d = self.degree.sample(rng);
        self.sample_k(d, rng).0
    }

    /// `(D̂_k, M_k)`.
    pub fn sample_k<R: Rng + ?Sized>(&mut self, k: u64, rng: &mut R) -> (u64, f64) {
        self.a.clear();
        self.b.clear();
        for _ in 0..k {
            self.a.push(sample_gumbel(rng) + pick(&self.log_w, rng));
            self.b.push(self.lambda * self.weight.sample(rng));
        }
        count_children(&self.a, &self.b)
    }
}

/// Limiting tree degree on the complete graph with weights `E^s`:
/// `D̂ = 1 + Σ_i 1{Λ_i + log W_i + λ_s X_i < M}` over the Poisson points `X_i`.
pub struct CompleteGraphSampler {
    s: f64,
    power: Power,
    lambda: f64,
    log_w: Vec<f64>,
    pub margin: f64,
    pub point_budget: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CompleteGraphSampler {
    pub fn new(s: f64, w_pool: &SamplePool) -> Result<Self> {
        Ok(CompleteGraphSampler {
            s,
            power: Power::new(s),
            lambda: lambda_s(s)?,
            log_w: log_pool(w_pool),
            margin: DEFAULT_MARGIN,
            point_budget: DEFAULT_POINT_BUDGET,
            a: Vec::new(),
            b: Vec::new(),
        })
    }

    /// Points are generated until `λ_s X − |M_seen| > margin`.
    pub fn sample_with_m<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(u64, f64)> {
        self.a.clear();
        self.b.clear();
        let mut g = 0.0;
        let mut m = f64::NEG_INFINITY;
        loop {
            g += sample_exp(rng);
            let bx = self.lambda * self.power.apply(g);
            let a = sample_gumbel(rng) + pick(&self.log_w, rng);
            m = m.max(a - bx);
            self.a.push(a);
            self.b.push(bx);
            if bx - m.abs() > self.margin {
                break;
            }
            if self.a.len() >= self.point_budget {
                return Err(Error::ResourceCap(format!(
                    "point budget {} exhausted (s = {}, M = {m}, last λX = {bx})",
                    self.point_budget, self.s
                )));
            }
        }
        Ok(count_children(&self.a, &self.b))
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        Ok(self.sample_with_m(rng)?.0)
    }
}

/// Limiting tree degree on the configuration model with τ ∈ (2, 3) and exponential weights:
/// `D̂ = 1 + Σ_{i ≤ D} 1{V_i − E_i > ξ}`, `ξ = min_i (V_i + E_i)`.
pub struct InfiniteVarianceSampler {
    degree: DegreeSampler,
    v: Vec<f64>,
    buf: Vec<(f64, f64)>,
}

impl InfiniteVarianceSampler {
    pub fn new(degree: &DegreeLaw, v_pool: &SamplePool) -> Self {
        InfiniteVarianceSampler {
            degree: degree.sampler(),
            v: v_pool.samples().to_vec(),
            buf: Vec::new(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        let d = self.degree.sample(rng);
        self.sample_k(d, rng)
    }

    pub fn sample_k<R: Rng + ?Sized>(&mut self, k: u64, rng: &mut R) -> u64 {
        if k == 0 {
            return 0;
        }
        self.buf.clear();
        let mut xi = f64::INFINITY;
        for _ in 0..k {
            let v = pick(&self.v, rng);
            let e = sample_exp(rng);
            xi = xi.min(v + e);
            self.buf.push((v, e));
        }
        1 + self.buf.iter().filter(|(v, e)| v - e > xi).count() as u64
    }

    /// Fraction of `count` fresh pairs with `V > E`.
    pub fn p_v_exceeds_e<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> f64 {
        (0..count)
            .filter(|_| pick(&self.v, rng) > sample_exp(rng))
            .count() as f64
            / count as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::pool::{PoolMeta, PoolTarget};
    use crate::rng::RngStream;

    fn unit_pool() -> SamplePool {
        SamplePool::new(
            PoolTarget::WComplete,
            vec![0.5, 1.0, 1.5],
            0,
            PoolMeta::default(),
        )
        .unwrap()
    }

    #[test]
    fn argmax_never_counts() {
        let (d, m) = count_children(&[1.0, 0.0], &[0.5, 0.1]);
        assert_eq!(m, 0.5);
        assert_eq!(d, 2);
        assert_eq!(count_children(&[1.0, -5.0], &[0.5, 6.0]).0, 1);
        assert_eq!(count_children(&[f64::NEG_INFINITY; 3], &[1.0; 3]).0, 0);
        // dead neighbours are children of a surviving vertex
        assert_eq!(count_children(&[0.0, f64::NEG_INFINITY], &[1.0, 1.0]).0, 2);
    }

    #[test]
    fn degree_one_gives_one() {
        let mut fv = FiniteVarianceSampler::new(
            &DegreeLaw::fixed(4).unwrap(),
            WeightLaw::Exponential,
            2.0,
            &unit_pool(),
        )
        .unwrap();
        let mut iv = InfiniteVarianceSampler::new(
            &DegreeLaw::power_law(2.5, 2).unwrap(),
            &SamplePool::new(PoolTarget::V, vec![0.2, 0.4], 0, PoolMeta::default()).unwrap(),
        );
        let mut rng = RngStream::new(8, 0).rng();
        for _ in 0..1000 {
            assert_eq!(fv.sample_k(1, &mut rng).0, 1);
            assert_eq!(iv.sample_k(1, &mut rng), 1);
            let d = fv.sample(&mut rng);
            assert!((1..=4).contains(&d));
        }
    }

    #[test]
    fn complete_sampler_budget() {
        let mut cg = CompleteGraphSampler::new(1.0, &unit_pool()).unwrap();
        cg.point_budget = 3;
        let mut rng = RngStream::new(8, 1).rng();
        assert!(matches!(cg.sample(&mut rng), Err(Error::ResourceCap(_))));
        cg.point_budget = DEFAULT_POINT_BUDGET;
        assert!(cg.sample(&mut rng).unwrap() >= 1);
    }
}
