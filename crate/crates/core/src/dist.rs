//! Sampling of the laws used throughout: edge weights, Gumbel variables,
//! Poisson-process points and degree distributions (with size-biasing).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::special::{integrate_half_line, power_sum};

/// Default truncation point for power-law degrees.
pub const DEFAULT_K_MAX: u64 = 10_000_000;

#[inline]
pub fn sample_exp<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Standard Gumbel variable as `log(1/E)` with `E ~ Exp(1)`.
#[inline]
pub fn sample_gumbel<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    gumbel_from_exp(sample_exp(rng))
}

#[inline]
pub fn gumbel_from_exp(e: f64) -> f64 {
    -e.ln()
}

/// Successive points `X_i = (E_1 + ... + E_i)^s` of the Poisson process with
/// intensity `dμ_s(x) = x^{1/s-1}/s dx`.
#[derive(Debug, Clone)]
pub struct PoissonPoints {
    s: f64,
    partial: f64,
}

impl PoissonPoints {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!(
                "exponent s must be positive, got {s}"
            )));
        }
        Ok(PoissonPoints { s, partial: 0.0 })
    }

    #[inline]
    pub fn next_point<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        self.partial += sample_exp(rng);
        self.point_from_partial()
    }

    /// Advance with an externally supplied exponential increment.
    #[inline]
    pub fn push(&mut self, e: f64) -> f64 {
        self.partial += e;
        self.point_from_partial()
    }

    #[inline]
    fn point_from_partial(&self) -> f64 {
        if self.s == 1.0 {
            self.partial
        } else {
            self.partial.powf(self.s)
        }
    }
}

pub fn sample_ppp_prefix<R: Rng + ?Sized>(s: f64, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    let mut points = PoissonPoints::new(s)?;
    Ok((0..count).map(|_| points.next_point(rng)).collect())
}

/// Edge-weight law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightLaw {
    /// Exp(1)
    Exponential,
    /// `E^s` with `E ~ Exp(1)`
    PoweredExponential { s: f64 },
    /// Uniform on (0, 1]
    Uniform,
    /// Every weight equals 1 (breadth-first exploration).
    Constant,
}

impl WeightLaw {
    pub fn powered(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!(
                "exponent s must be positive, got {s}"
            )));
        }
        Ok(WeightLaw::PoweredExponential { s })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightLaw::Exponential => sample_exp(rng),
            WeightLaw::PoweredExponential { s } => {
                let e = sample_exp(rng);
                if s == 1.0 {
                    e
                } else {
                    e.powf(s)
                }
            }
            WeightLaw::Uniform => 1.0 - rng.random::<f64>(),
            WeightLaw::Constant => 1.0,
        }
    }

    /// Inverse cdf at `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            WeightLaw::Exponential => -(-u).ln_1p(),
            WeightLaw::PoweredExponential { s } => (-(-u).ln_1p()).powf(s),
            WeightLaw::Uniform => u,
            WeightLaw::Constant => 1.0,
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, WeightLaw::Constant)
    }

    pub fn mean(&self) -> f64 {
        match *self {
            WeightLaw::Exponential => 1.0,
            WeightLaw::PoweredExponential { s } => crate::special::gamma(1.0 + s),
            WeightLaw::Uniform => 0.5,
            WeightLaw::Constant => 1.0,
        }
    }

    /// `E[e^{-λY}]`, closed form where available.
    pub fn laplace(&self, lambda: f64) -> f64 {
        match *self {
            WeightLaw::Exponential => 1.0 / (1.0 + lambda),
            WeightLaw::PoweredExponential { s } if s == 1.0 => 1.0 / (1.0 + lambda),
            WeightLaw::PoweredExponential { s } => {
                integrate_half_line(|t| (-lambda * t.powf(s) - t).exp(), 1e-14)
            }
            WeightLaw::Uniform => {
                if lambda.abs() < 1e-8 {
                    1.0 - lambda / 2.0
                } else {
                    -(-lambda).exp_m1() / lambda
                }
            }
            WeightLaw::Constant => (-lambda).exp(),
        }
    }

    /// Whether `E[e^{λY}] < ∞`.
    pub fn has_exponential_moment(&self, lambda: f64) -> bool {
        match *self {
            WeightLaw::Exponential => lambda < 1.0,
            WeightLaw::PoweredExponential { s } => s < 1.0 || (s == 1.0 && lambda < 1.0),
            WeightLaw::Uniform | WeightLaw::Constant => true,
        }
    }
}

impl fmt::Display for WeightLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightLaw::Exponential => write!(f, "exp"),
            WeightLaw::PoweredExponential { s } => write!(f, "exp-pow:{s}"),
            WeightLaw::Uniform => write!(f, "uniform"),
            WeightLaw::Constant => write!(f, "const"),
        }
    }
}

impl FromStr for WeightLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "exp" | "exponential" => Ok(WeightLaw::Exponential),
            "uniform" => Ok(WeightLaw::Uniform),
            "const" | "constant" | "1" => Ok(WeightLaw::Constant),
            _ => {
                let rest = s
                    .strip_prefix("exp-pow:")
                    .or_else(|| s.strip_prefix("powexp:"))
                    .ok_or_else(|| Error::invalid(format!("unknown weight law '{s}'")))?;
                let e: f64 = rest
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad exponent in weight law '{s}'")))?;
                WeightLaw::powered(e)
            }
        }
    }
}

/// Discrete law on `[lo, hi]` with mass proportional to `k^{-a}`, `a > 1`.
///
/// Rejection from the continuous density `x^{-a}` on `[lo - 1/2, hi + 1/2)`
/// rounded to the nearest integer. By convexity the rounded proposal mass of
/// `k` dominates `k^{-a}`, so the envelope constant is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTailSampler {
    a: f64,
    lo: u64,
    hi: Option<u64>,
    g_lo: f64,
    g_span: f64,
}

impl PowerTailSampler {
    pub fn new(a: f64, lo: u64, hi: Option<u64>) -> Result<Self> {
        if !(a > 1.0) || lo == 0 || hi.is_some_and(|h| h < lo) {
            return Err(Error::invalid(format!(
                "bad power tail a={a} lo={lo} hi={hi:?}"
            )));
        }
        let g = |x: f64| x.powf(1.0 - a);
        let g_lo = g(lo as f64 - 0.5);
        let g_hi = hi.map_or(0.0, |h| g(h as f64 + 0.5));
        Ok(PowerTailSampler {
            a,
            lo,
            hi,
            g_lo,
            g_span: g_lo - g_hi,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let inv = 1.0 / (1.0 - self.a);
        loop {
            let u: f64 = rng.random();
            let x = (self.g_lo - u * self.g_span).powf(inv);
            let mut k = (x + 0.5).floor();
            if !(k >= self.lo as f64) {
                k = self.lo as f64;
            }
            if let Some(h) = self.hi {
                k = k.min(h as f64);
            }
            let proposal =
                ((k - 0.5).powf(1.0 - self.a) - (k + 0.5).powf(1.0 - self.a)) / (self.a - 1.0);
            let target = k.powf(-self.a);
            let v: f64 = rng.random();
            if v * proposal <= target {
                // k < 2^64 here: huge draws only occur without an upper bound
                // and callers clamp them.
                return if k >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    k as u64
                };
            }
        }
    }
}

/// `P(D = k) ∝ k^{-τ}` for `k >= d_min`; the mass beyond `k_max` is placed
/// on `k_max` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub tau: f64,
    pub d_min: u64,
    pub k_max: u64,
    norm: f64,
    tail: f64,
}

impl PowerLaw {
    pub fn new(tau: f64, d_min: u64, k_max: u64) -> Result<Self> {
        if !(tau > 2.0 && tau.is_finite()) {
            return Err(Error::invalid(format!(
                "power-law exponent must exceed 2, got {tau}"
            )));
        }
        if d_min == 0 || k_max <= d_min {
            return Err(Error::invalid(format!(
                "need 1 <= d_min < k_max, got {d_min}, {k_max}"
            )));
        }
        Ok(PowerLaw {
            tau,
            d_min,
            k_max,
            norm: power_sum(tau, d_min, None),
            tail: power_sum(tau, k_max, None),
        })
    }

    pub fn with_default_cap(tau: f64, d_min: u64) -> Result<Self> {
        Self::new(tau, d_min, DEFAULT_K_MAX)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if k < self.d_min || k > self.k_max {
            0.0
        } else if k == self.k_max {
            self.tail / self.norm
        } else {
            (k as f64).powf(-self.tau) / self.norm
        }
    }

    /// Mass moved onto `k_max` by the truncation.
    pub fn truncated_mass(&self) -> f64 {
        (self.tail - (self.k_max as f64).powf(-self.tau)) / self.norm
    }

    /// `Σ_{d_min <= k < k_max} k^{j} P(D = k)` plus the atom, for j = 1, 2.
    fn moment(&self, j: i32) -> f64 {
        let body = power_sum(self.tau - f64::from(j), self.d_min, Some(self.k_max - 1));
        (body + (self.k_max as f64).powi(j) * self.tail) / self.norm
    }
}

/// Finite-support pmf, sorted by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    ks: Vec<u64>,
    ps: Vec<f64>,
    cdf: Vec<f64>,
}

impl Pmf {
    /// Entries with zero probability are dropped; the total must be 1 within
    /// 1e-6 and is then renormalised exactly.
    pub fn new(mut entries: Vec<(u64, f64)>) -> Result<Self> {
        entries.retain(|&(_, p)| p != 0.0);
        if entries.is_empty() {
            return Err(Error::invalid("empty pmf"));
        }
        if let Some(&(k, p)) = entries.iter().find(|&&(_, p)| !(p > 0.0 && p.is_finite())) {
            return Err(Error::invalid(format!("bad probability {p} at k={k}")));
        }
        entries.sort_by_key(|&(k, _)| k);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("duplicate degree in pmf"));
        }
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(format!("pmf sums to {total}, expected 1")));
        }
        let ks: Vec<u64> = entries.iter().map(|&(k, _)| k).collect();
        let ps: Vec<f64> = entries.iter().map(|&(_, p)| p / total).collect();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = ps
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        *cdf.last_mut().expect("nonempty") = 1.0;
        Ok(Pmf { ks, ps, cdf })
    }

    pub fn support(&self) -> &[u64] {
        &self.ks
    }

    pub fn probs(&self) -> &[f64] {
        &self.ps
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.ks.iter().copied().zip(self.ps.iter().copied())
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.ks.binary_search(&k).map_or(0.0, |i| self.ps[i])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u).min(self.ks.len() - 1);
        self.ks[i]
    }

    fn moment(&self, j: i32) -> f64 {
        self.iter().map(|(k, p)| (k as f64).powi(j) * p).sum()
    }

    /// Parse "k p_k" lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(k), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse(
                    i + 1,
                    format!("expected 'k p_k', got '{line}'"),
                ));
            };
            let k: u64 = k
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad degree '{k}'")))?;
            let p: f64 = p
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad probability '{p}'")))?;
            entries.push((k, p));
        }
        Pmf::new(entries)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Pmf::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# k p_k\n");
        for (k, p) in self.iter() {
            out.push_str(&format!("{k} {p:.17e}\n"));
        }
        out
    }
}

/// Law of a vertex degree.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeLaw {
    Fixed(u64),
    PowerLaw(PowerLaw),
    Explicit(Pmf),
    /// Size-biased version of a power law: mass `∝ k P(D = k)`.
    SizeBiasedPowerLaw(PowerLaw),
}

/// Result of size-biasing a degree law.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeBiased {
    pub law: DegreeLaw,
    /// `E[D* - 1] = E[D(D-1)]/E[D]` (finite under the truncation).
    pub nu: f64,
    /// The untruncated size-biased law has infinite mean (power law with τ ≤ 3).
    pub infinite_mean: bool,
}

impl DegreeLaw {
    pub fn fixed(r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("fixed degree must be at least 1"));
        }
        Ok(DegreeLaw::Fixed(r))
    }

    pub fn power_law(tau: f64, d_min: u64) -> Result<Self> {
        Ok(DegreeLaw::PowerLaw(PowerLaw::with_default_cap(tau, d_min)?))
    }

    pub fn explicit(entries: Vec<(u64, f64)>) -> Result<Self> {
        Ok(DegreeLaw::Explicit(Pmf::new(entries)?))
    }

    pub fn sampler(&self) -> DegreeSampler {
        DegreeSampler::new(self)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.sampler().sample(rng)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        match self {
            DegreeLaw::Fixed(r) => f64::from(u8::from(k == *r)),
            DegreeLaw::PowerLaw(pl) => pl.pmf(k),
            DegreeLaw::Explicit(p) => p.pmf(k),
            DegreeLaw::SizeBiasedPowerLaw(pl) => {
                let mean = pl.moment(1);
                k as f64 * pl.pmf(k) / mean
            }
        }
    }

    pub fn min_degree(&self) -> u64 {
        match self {
            DegreeLaw::Fixed(r) => *r,
            DegreeLaw::PowerLaw(pl) | DegreeLaw::SizeBiasedPowerLaw(pl) => pl.d_min,
            DegreeLaw::Explicit(p) => p.ks[0],
        }
    }

    pub fn max_degree(&self) -> u64 {
        match self {
            DegreeLaw::Fixed(r) => *r,
            DegreeLaw::PowerLaw(pl) | DegreeLaw::SizeBiasedPowerLaw(pl) => pl.k_max,
            DegreeLaw::Explicit(p) => *p.ks.last().expect("nonempty"),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            DegreeLaw::Fixed(r) => *r as f64,
            DegreeLaw::PowerLaw(pl) => pl.moment(1),
            DegreeLaw::Explicit(p) => p.moment(1),
            DegreeLaw::SizeBiasedPowerLaw(pl) => pl.moment(2) / pl.moment(1),
        }
    }

    /// `E[D(D-1)]`.
    pub fn second_factorial_moment(&self) -> f64 {
        match self {
            DegreeLaw::Fixed(r) => (*r as f64) * (*r as f64 - 1.0),
            DegreeLaw::PowerLaw(pl) => pl.moment(2) - pl.moment(1),
            DegreeLaw::Explicit(p) => p.moment(2) - p.moment(1),
            DegreeLaw::SizeBiasedPowerLaw(pl) => {
                let third = power_sum(pl.tau - 3.0, pl.d_min, Some(pl.k_max - 1))
                    + (pl.k_max as f64).powi(3) * pl.tail;
                (third / pl.norm - pl.moment(2)) / pl.moment(1)
            }
        }
    }

    /// Tabulated pmf on `0..=k_hi`, for the bounded-support comparisons.
    pub fn pmf_table(&self, k_hi: u64) -> Vec<f64> {
        (0..=k_hi).map(|k| self.pmf(k)).collect()
    }

    /// Law of `D*` with `P(D* = k) = k P(D = k) / E[D]`.
    pub fn size_biased(&self) -> Result<SizeBiased> {
        match self {
            DegreeLaw::Fixed(r) => Ok(SizeBiased {
                law: DegreeLaw::Fixed(*r),
                nu: *r as f64 - 1.0,
                infinite_mean: false,
            }),
            DegreeLaw::Explicit(p) => {
                let mean = p.moment(1);
                if !(mean > 0.0) {
                    return Err(Error::invalid("cannot size-bias a law with zero mean"));
                }
                let entries = p.iter().map(|(k, q)| (k, k as f64 * q / mean)).collect();
                let law = DegreeLaw::Explicit(Pmf::new(entries)?);
                Ok(SizeBiased {
                    nu: self.second_factorial_moment() / mean,
                    law,
                    infinite_mean: false,
                })
            }
            DegreeLaw::PowerLaw(pl) => Ok(SizeBiased {
                law: DegreeLaw::SizeBiasedPowerLaw(*pl),
                nu: self.second_factorial_moment() / self.mean(),
                infinite_mean: pl.tau <= 3.0,
            }),
            DegreeLaw::SizeBiasedPowerLaw(_) => {
                Err(Error::invalid("size-biasing is applied at most once"))
            }
        }
    }

    /// `f'(t) = Σ k p_k t^{k-1}` for finite-support laws.
    pub fn pgf_derivative(&self, t: f64) -> Result<f64> {
        match self {
            DegreeLaw::Fixed(r) => Ok(*r as f64 * t.powi(*r as i32 - 1)),
            DegreeLaw::Explicit(p) => Ok(p
                .iter()
                .filter(|&(k, _)| k > 0)
                .map(|(k, q)| k as f64 * q * t.powi(k as i32 - 1))
                .sum()),
            _ => Err(Error::invalid(
                "generating function needs a finite-support degree law",
            )),
        }
    }
}

impl fmt::Display for DegreeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeLaw::Fixed(r) => write!(f, "fixed:{r}"),
            DegreeLaw::PowerLaw(pl) => write!(f, "powerlaw:{}:{}:{}", pl.tau, pl.d_min, pl.k_max),
            DegreeLaw::SizeBiasedPowerLaw(pl) => {
                write!(
                    f,
                    "sizebiased-powerlaw:{}:{}:{}",
                    pl.tau, pl.d_min, pl.k_max
                )
            }
            DegreeLaw::Explicit(p) => {
                let items: Vec<String> = p.iter().map(|(k, q)| format!("{k}={q}")).collect();
                write!(f, "explicit:{}", items.join(","))
            }
        }
    }
}

impl FromStr for DegreeLaw {
    type Err = Error;

    /// `fixed:R`, `powerlaw:TAU:DMIN[:KMAX]`, `explicit:k=p,k=p,...` or `pmf:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("bad degree law '{s}'")))?;
        let bad = || Error::invalid(format!("bad degree law '{s}'"));
        match kind {
            "fixed" => DegreeLaw::fixed(rest.parse().map_err(|_| bad())?),
            "powerlaw" => {
                let parts: Vec<&str> = rest.split(':').collect();
                let tau: f64 = parts.first().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let d_min: u64 = parts.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let k_max: u64 = match parts.get(2) {
                    Some(k) => k.parse().map_err(|_| bad())?,
                    None => DEFAULT_K_MAX,
                };
                if parts.len() > 3 {
                    return Err(bad());
                }
                Ok(DegreeLaw::PowerLaw(PowerLaw::new(tau, d_min, k_max)?))
            }
            "explicit" => {
                let mut entries = Vec::new();
                for item in rest.split(',') {
                    let (k, p) = item.split_once('=').ok_or_else(bad)?;
                    entries.push((
                        k.trim().parse().map_err(|_| bad())?,
                        p.trim().parse().map_err(|_| bad())?,
                    ));
                }
                DegreeLaw::explicit(entries)
            }
            "pmf" => Ok(DegreeLaw::Explicit(Pmf::read(Path::new(rest))?)),
            _ => Err(bad()),
        }
    }
}

/// Precomputed sampler for a [`DegreeLaw`].
#[derive(Debug, Clone)]
pub enum DegreeSampler {
    Fixed(u64),
    /// Untruncated draw, then clamped to `k_max`: exactly the folded law.
    PowerLaw {
        tail: PowerTailSampler,
        k_max: u64,
    },
    SizeBiasedPowerLaw {
        body: PowerTailSampler,
        atom_prob: f64,
        k_max: u64,
    },
    Explicit(Pmf),
}

impl DegreeSampler {
    pub fn new(law: &DegreeLaw) -> Self {
        match law {
            DegreeLaw::Fixed(r) => DegreeSampler::Fixed(*r),
            DegreeLaw::PowerLaw(pl) => DegreeSampler::PowerLaw {
                tail: PowerTailSampler::new(pl.tau, pl.d_min, None).expect("validated power law"),
                k_max: pl.k_max,
            },
            DegreeLaw::SizeBiasedPowerLaw(pl) => {
                let body_mass = power_sum(pl.tau - 1.0, pl.d_min, Some(pl.k_max - 1));
                let atom = pl.k_max as f64 * pl.tail;
                DegreeSampler::SizeBiasedPowerLaw {
                    body: PowerTailSampler::new(pl.tau - 1.0, pl.d_min, Some(pl.k_max - 1))
                        .expect("validated power law"),
                    atom_prob: atom / (atom + body_mass),
                    k_max: pl.k_max,
                }
            }
            DegreeLaw::Explicit(p) => DegreeSampler::Explicit(p.clone()),
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            DegreeSampler::Fixed(r) => *r,
            DegreeSampler::PowerLaw { tail, k_max } => tail.sample(rng).min(*k_max),
            DegreeSampler::SizeBiasedPowerLaw {
                body,
                atom_prob,
                k_max,
            } => {
                if rng.random::<f64>() < *atom_prob {
                    *k_max
                } else {
                    body.sample(rng)
                }
            }
            DegreeSampler::Explicit(p) => p.sample(rng),
        }
    }
}
