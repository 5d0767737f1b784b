//! Path-length recentering on the complete graph.
//!
//! For weights `E^s` the passage time `C_n` between two uniform vertices
//! satisfies `λ_s n^s C_n − log n → −Λ − log W' − log W − log s` with
//! `W, W'` independent copies of the martingale limit.
//!
//! The `− log s` term comes from the collision rate of the two exploration
//! clusters: each grows like `s W e^{λ_s t}`, and pairs at total length `L`
//! appear at rate `e^{λ_s L} s² λ_s² K W W' / n` with
//! `K = ∫∫ e^{−λ_s(a+b)} ((a+b)^{1/s} − |a−b|^{1/s}) da db = 1/(s λ_s²)`.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;

use super::distance::ks_two_sample;
use crate::dist::sample_exp;
use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, VertexId};
use crate::oracles::{lambda_s, PoolTarget, SamplePool};
use crate::rng::RngStream;
use crate::spt::complete_graph_tree;

/// Minimum number of (source, target) pairs per `n`.
pub const MIN_PAIRS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct RecenteringConfig {
    pub s: f64,
    pub n_grid: Vec<usize>,
    /// Independent graphs per `n`.
    pub graphs: usize,
    /// Distinct uniform sources per graph.
    pub sources_per_graph: usize,
    /// Uniform targets per source; `None` uses every other vertex.
    pub targets_per_source: Option<usize>,
    pub edge_budget: u64,
}

impl RecenteringConfig {
    pub fn new(s: f64, n_grid: Vec<usize>) -> Self {
        RecenteringConfig {
            s,
            n_grid,
            graphs: 20,
            sources_per_graph: 50,
            targets_per_source: None,
            edge_budget: 100_000_000,
        }
    }
}

/// Recentered samples at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecenteredSample {
    pub n: usize,
    pub sources: usize,
    pub values: Vec<f64>,
}

impl RecenteredSample {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn quantile(&self, p: f64) -> f64 {
        quantile(&self.values, p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecenteringReport {
    pub samples: Vec<RecenteredSample>,
    /// KS distance between the laws at consecutive grid values.
    pub consecutive_ks: Vec<f64>,
    /// `median(largest n) − median(reference)` when a reference was given.
    pub offset: Option<f64>,
    /// KS between the largest-`n` law and the reference (no shift).
    pub reference_ks: Option<f64>,
}

impl RecenteringReport {
    pub fn stable(&self, ks_tol: f64) -> bool {
        self.consecutive_ks.iter().all(|&d| d < ks_tol)
    }
}

/// `λ_s n^s C_n(u, v) − log n` over random (source, target) pairs.
///
/// Graph `g` uses `stream.substream(g)`; graphs run in parallel and are
/// merged in index order.
pub fn recentered_path_lengths(
    n: usize,
    s: f64,
    graphs: usize,
    sources_per_graph: usize,
    targets_per_source: Option<usize>,
    edge_budget: u64,
    stream: RngStream,
) -> Result<RecenteredSample> {
    let lambda = lambda_s(s)?;
    if n < 2 || sources_per_graph == 0 || sources_per_graph > n || graphs == 0 {
        return Err(Error::invalid(format!(
            "need n >= 2 and 1..=n sources per graph, got n={n}, graphs={graphs}, sources={sources_per_graph}"
        )));
    }
    if targets_per_source.is_some_and(|t| t == 0 || t > n - 1) {
        return Err(Error::invalid(format!(
            "targets per source must be in 1..={}",
            n - 1
        )));
    }
    let per_target = targets_per_source.unwrap_or(n - 1);
    if graphs * sources_per_graph * per_target < MIN_PAIRS {
        return Err(Error::InsufficientData(format!(
            "{} pairs at n={n}; need at least {MIN_PAIRS}",
            graphs * sources_per_graph * per_target
        )));
    }
    let scale = lambda * (n as f64).powf(s);
    let shift = (n as f64).ln();
    let chunks: Vec<Vec<f64>> = (0..graphs as u64)
        .into_par_iter()
        .map_init(
            || None::<CompleteGraph>,
            |slot, g| {
                let gs = stream.substream(g);
                // one matrix per worker, redrawn for each graph
                let graph = match slot {
                    Some(graph) => {
                        graph.resample(gs.labeled("weights"));
                        graph
                    }
                    None => slot.insert(CompleteGraph::build(
                        n,
                        s,
                        gs.labeled("weights"),
                        edge_budget,
                    )?),
                };
                let graph = &*graph;
                let mut rng = gs.labeled("pairs").rng();
                let sources = sample_indices(&mut rng, n, sources_per_graph);
                let mut out = Vec::with_capacity(sources_per_graph * per_target);
                for src in sources.iter() {
                    let tree = complete_graph_tree(graph, src as VertexId)?;
                    let d = tree.distances();
                    match targets_per_source {
                        None => out.extend(
                            d.iter()
                                .enumerate()
                                .filter(|&(v, _)| v != src)
                                .map(|(_, &c)| scale * c - shift),
                        ),
                        Some(t) => {
                            // uniform over the n − 1 vertices other than src
                            for v in sample_indices(&mut rng, n - 1, t).iter() {
                                let v = if v >= src { v + 1 } else { v };
                                out.push(scale * d[v] - shift);
                            }
                        }
                    }
                }
                Ok(out)
            },
        )
        .collect::<Result<_>>()?;
    Ok(RecenteredSample {
        n,
        sources: graphs * sources_per_graph,
        values: chunks.concat(),
    })
}

/// Runs the grid and compares consecutive laws, and the largest `n` against
/// `reference` (e.g. [`recentering_oracle_samples`]) after a location fit.
pub fn recentering_check(
    cfg: &RecenteringConfig,
    reference: Option<&[f64]>,
    stream: RngStream,
) -> Result<RecenteringReport> {
    if cfg.n_grid.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 values of n, got {}",
            cfg.n_grid.len()
        )));
    }
    let samples = cfg
        .n_grid
        .iter()
        .map(|&n| {
            recentered_path_lengths(
                n,
                cfg.s,
                cfg.graphs,
                cfg.sources_per_graph,
                cfg.targets_per_source,
                cfg.edge_budget,
                stream.substream(n as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let consecutive_ks = samples
        .windows(2)
        .map(|w| ks_two_sample(&w[0].values, &w[1].values))
        .collect::<Result<Vec<_>>>()?;
    let (offset, reference_ks) = match reference {
        Some(r) => {
            let last = &samples[samples.len() - 1].values;
            (
                Some(fit_location_offset(last, r)?),
                Some(ks_two_sample(last, r)?),
            )
        }
        None => (None, None),
    };
    Ok(RecenteringReport {
        samples,
        consecutive_ks,
        offset,
        reference_ks,
    })
}

/// Additive constant of the limit law, `−log s`.
pub fn recentering_constant(s: f64) -> f64 {
    -s.ln()
}

/// Draws of `−Λ − log W' − log W − log s` with `W, W'` resampled from a
/// complete-graph pool and `Λ = −log E`.
pub fn recentering_oracle_samples<R: Rng + ?Sized>(
    pool: &SamplePool,
    count: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let s = match (pool.target(), pool.meta.s) {
        (PoolTarget::WComplete, Some(s)) => s,
        _ => {
            return Err(Error::invalid(
                "recentering needs a w-complete pool with s recorded",
            ))
        }
    };
    let c = recentering_constant(s);
    Ok((0..count)
        .map(|_| {
            let e = sample_exp(rng);
            e.ln() - pool.draw(rng).ln() - pool.draw(rng).ln() + c
        })
        .collect())
}

/// Location shift `median(a) − median(b)`.
pub fn fit_location_offset(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    Ok(quantile(a, 0.5) - quantile(b, 0.5))
}

fn quantile(xs: &[f64], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let pos = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}
