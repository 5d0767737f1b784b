//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run a subset with `cargo test -p fpp-core --test acceptance -- 3 7`.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rand::Rng;

use fpp_core::analysis::{
    ccdf_regression, default_k_min, geometric_pmf, ks_one_sample, ks_two_sample,
    rate_of_convergence_fit, recentered_path_lengths, tv_distance, DegreeDistribution, GrowthModel,
};
use fpp_core::dist::{sample_gumbel, DegreeLaw, PowerTailSampler, WeightLaw};
use fpp_core::error::Result;
use fpp_core::graph::{
    build_configuration_model, draw_degree_sequence, CompleteGraph, VertexId, WeightedMultiGraph,
};
use fpp_core::oracles::{
    bfst_limit_pmf, closed_form::prob_m_at_least, gf_hatd_deterministic_weights, solve_malthusian,
    solve_v_min_recursion, solve_v_series, solve_w_cm, solve_w_complete, unit_weight_sampler,
    w_regular_exponential_laplace, CompleteGraphSampler, FiniteVarianceSampler,
    InfiniteVarianceSampler, PoolConfig, SamplePool, DEFAULT_SERIES_CUTOFF, DEFAULT_TRUNCATION,
};
use fpp_core::rng::RngStream;
use fpp_core::spt::{
    bfst, complete_graph_tree, degree_via_excision, mean_tree_degree, pooled_tree_degrees,
    shortest_path_tree, shortest_path_trees, ExcisionOutcome, ShortestPathTree,
};

const SEED: u64 = 20_140_601;
const DRAWS: usize = 1_000_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn stream(criterion: u64) -> RngStream {
    RngStream::new(SEED, criterion)
}

fn cm_graph(
    law: &DegreeLaw,
    weight: &WeightLaw,
    n: usize,
    s: RngStream,
) -> Result<WeightedMultiGraph> {
    let seq = draw_degree_sequence(law, n, s.labeled("degrees"))?;
    let mut g = build_configuration_model(&seq, s.labeled("pairing"))?;
    g.attach_weights(weight, s.labeled("weights"));
    Ok(g)
}

fn random_sources(n: usize, count: usize, s: RngStream) -> Vec<VertexId> {
    sample_indices(&mut s.rng(), n, count)
        .iter()
        .map(|v| v as VertexId)
        .collect()
}

/// Pmf of `count` sampler draws.
fn oracle_pmf<F: FnMut() -> Result<u64>>(count: usize, mut draw: F) -> Result<DegreeDistribution> {
    let samples = (0..count).map(|_| draw()).collect::<Result<Vec<_>>>()?;
    DegreeDistribution::from_samples(samples)
}

fn mean_of(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        0.5 * (xs[m / 2 - 1] + xs[m / 2])
    }
}

fn w_complete(s: f64, size: usize, id: u64) -> Result<SamplePool> {
    solve_w_complete(
        s,
        DEFAULT_TRUNCATION,
        &PoolConfig::with_size(size),
        RngStream::new(SEED, 1000 + id),
    )
}

fn w_cm_exponential(r: u64, size: usize, id: u64) -> Result<(SamplePool, f64)> {
    let law = DegreeLaw::fixed(r)?;
    let lambda = solve_malthusian(law.size_biased()?.nu, &WeightLaw::Exponential)?;
    let pool = solve_w_cm(
        &law,
        &WeightLaw::Exponential,
        lambda,
        &PoolConfig::with_size(size),
        RngStream::new(SEED, 2000 + id),
    )?;
    Ok((pool, lambda))
}

fn handshake_ok(t: &ShortestPathTree) -> bool {
    let sum: u64 = t.tree_degrees().iter().map(|&d| u64::from(d)).sum();
    let r = t.reached() as u64;
    sum == 2 * (r - 1) && mean_tree_degree(t) == 2.0 * (r - 1) as f64 / t.vertex_count() as f64
}

// 1
fn handshake() -> Result<Outcome> {
    let s = stream(1);
    let mut trees = Vec::new();
    let g = cm_graph(
        &DegreeLaw::fixed(4)?,
        &WeightLaw::Exponential,
        10_000,
        s.labeled("cm"),
    )?;
    trees.extend(shortest_path_trees(
        &g,
        &random_sources(10_000, 5, s.labeled("src")),
    )?);
    // degrees 1 leave many small components
    let sparse = cm_graph(
        &DegreeLaw::explicit(vec![(1, 0.7), (3, 0.3)])?,
        &WeightLaw::Exponential,
        5_000,
        s.labeled("sparse"),
    )?;
    trees.extend(shortest_path_trees(
        &sparse,
        &random_sources(5_000, 5, s.labeled("src2")),
    )?);
    let kn = CompleteGraph::build(500, 1.0, s.labeled("kn"), 1 << 20)?;
    trees.push(complete_graph_tree(&kn, 0)?);
    trees.push(bfst(&g, 1, s.labeled("bfst"))?);
    let connected = &trees[trees.len() - 2];
    let exact = mean_tree_degree(connected) == 2.0 * 499.0 / 500.0;
    let partial = trees
        .iter()
        .filter(|t| t.reached() < t.vertex_count())
        .count();
    let bad = trees.iter().filter(|t| !handshake_ok(t)).count();
    outcome(
        bad == 0 && exact && partial > 0,
        format!(
            "{} trees ({partial} not spanning), {bad} violations; K_500 mean degree exact: {exact}",
            trees.len()
        ),
    )
}

// 2
fn geometric_s1() -> Result<Outcome> {
    let s = stream(2);
    let pool = w_complete(1.0, 1_000_000, 1)?;
    let mut sampler = CompleteGraphSampler::new(1.0, &pool)?;
    let mut rng = s.labeled("draws").rng();
    let oracle = oracle_pmf(DRAWS, || sampler.sample(&mut rng))?;
    let geo = geometric_pmf(0.5, 64);
    let tv_oracle = tv_distance(oracle.pmf_slice(), &geo)?;

    let n = 10_000;
    let g = CompleteGraph::build(n, 1.0, s.labeled("kn"), 100_000_000)?;
    let trees = random_sources(n, 20, s.labeled("src"))
        .into_iter()
        .map(|src| complete_graph_tree(&g, src))
        .collect::<Result<Vec<_>>>()?;
    drop(g);
    let sim = pooled_tree_degrees(&trees, true)?;
    let tv_sim = tv_distance(sim.pmf_slice(), &geo)?;
    outcome(
        tv_oracle < 0.005 && tv_sim < 0.02,
        format!("TV(oracle 1e6, Geo(1/2)) = {tv_oracle:.4} (< 0.005); TV(K_1e4 x 20 sources) = {tv_sim:.4} (< 0.02)"),
    )
}

/// One draw per stratum `[i/count, (i+1)/count)` of the folded power law;
/// the table covers `k < 10^6` and the rest is drawn from the exact tail.
fn stratified_power_law<R: Rng + ?Sized>(
    tau: f64,
    d_min: u64,
    k_max: u64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<u64>> {
    const TABLE: u64 = 1_000_000;
    let law = DegreeLaw::power_law(tau, d_min)?;
    let mut cdf = Vec::with_capacity(TABLE as usize);
    let mut acc = 0.0;
    for k in d_min..TABLE {
        acc += law.pmf(k);
        cdf.push(acc);
    }
    let tail = PowerTailSampler::new(tau, TABLE, None)?;
    Ok((0..count)
        .map(|i| {
            let u = (i as f64 + rng.random::<f64>()) / count as f64;
            match cdf.partition_point(|&c| c <= u) {
                j if j < cdf.len() => d_min + j as u64,
                _ => tail.sample(rng).min(k_max),
            }
        })
        .collect())
}

// 3
fn mean_two() -> Result<Outcome> {
    let s = stream(3);
    let mut means = Vec::new();
    for (i, x) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let pool = w_complete(x, 1_000_000, 10 + i as u64)?;
        let mut sampler = CompleteGraphSampler::new(x, &pool)?;
        let mut rng = s.substream(i as u64).rng();
        let mut total = 0u64;
        for _ in 0..DRAWS {
            total += sampler.sample(&mut rng)?;
        }
        means.push((format!("K s={x}"), total as f64 / DRAWS as f64));
    }
    let (pool, lambda) = w_cm_exponential(4, 1_000_000, 3)?;
    let law = DegreeLaw::fixed(4)?;
    let mut sampler = FiniteVarianceSampler::new(&law, WeightLaw::Exponential, lambda, &pool)?;
    let mut rng = s.labeled("fixed4").rng();
    let total: u64 = (0..DRAWS).map(|_| sampler.sample(&mut rng)).sum();
    means.push(("CM fixed(4)".into(), total as f64 / DRAWS as f64));

    let law = DegreeLaw::power_law(2.5, 2)?;
    let v = solve_v_min_recursion(&law, &PoolConfig::with_size(1_000_000), s.labeled("v"))?;
    let mut sampler = InfiniteVarianceSampler::new(&law, &v);
    let mut rng = s.labeled("powerlaw").rng();
    // D has infinite variance: draw it by stratified inverse cdf
    let degrees = stratified_power_law(2.5, 2, law.max_degree(), DRAWS, &mut rng)?;
    let total: u64 = degrees
        .into_iter()
        .map(|d| sampler.sample_k(d, &mut rng))
        .sum();
    means.push(("CM powerlaw(2.5)".into(), total as f64 / DRAWS as f64));

    let pass = means.iter().all(|(_, m)| (1.98..=2.02).contains(m));
    let detail = means
        .iter()
        .map(|(k, m)| format!("{k}: {m:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, format!("{detail} (each in [1.98, 2.02])"))
}

// 4
fn w_closed_forms() -> Result<Outcome> {
    let pool = w_complete(1.0, 2_000_000, 4)?;
    let ks = ks_one_sample(pool.samples(), |x| -(-x).exp_m1())?;
    let (r3, _) = w_cm_exponential(3, 1_000_000, 4)?;
    let lap_err = [0.5, 1.0, 2.0]
        .iter()
        .map(|&u| (r3.laplace(u) - w_regular_exponential_laplace(3, u)).abs())
        .fold(0.0, f64::max);
    let means = [pool.mean(), r3.mean()];
    let means_ok = means.iter().all(|m| (0.99..=1.01).contains(m));
    outcome(
        ks < 0.01 && lap_err < 0.01 && means_ok,
        format!(
            "KS(W_s=1, Exp(1)) = {ks:.4} (< 0.01); max |φ_W - (1+u/2)^-2| = {lap_err:.4} (< 0.01); means {:.4}, {:.4} (in [0.99, 1.01])",
            means[0], means[1]
        ),
    )
}

// 5
fn m_identities() -> Result<Outcome> {
    let s = stream(5);
    let mut detail = Vec::new();
    let mut pass = true;
    for (i, x) in [1.0, 2.0].into_iter().enumerate() {
        let pool = w_complete(x, 1_000_000, 20 + i as u64)?;
        let mut sampler = CompleteGraphSampler::new(x, &pool)?;
        let mut rng = s.substream(i as u64).rng();
        let m = (0..DRAWS)
            .map(|_| Ok(sampler.sample_with_m(&mut rng)?.1))
            .collect::<Result<Vec<f64>>>()?;
        let reference: Vec<f64> = (0..DRAWS)
            .map(|_| sample_gumbel(&mut rng) + pool.draw(&mut rng).ln())
            .collect();
        let ks = ks_two_sample(&m, &reference)?;
        pass &= ks < 0.01;
        detail.push(format!("KS(M, Λ+log W) s={x}: {ks:.4}"));
        if x == 1.0 {
            let err = [-1.0, 0.0, 1.0]
                .iter()
                .map(|&t| {
                    (m.iter().filter(|&&v| v >= t).count() as f64 / DRAWS as f64
                        - prob_m_at_least(t))
                    .abs()
                })
                .fold(0.0, f64::max);
            pass &= err < 0.01;
            detail.push(format!("max |P(M>=m) - 1/(1+e^m)| = {err:.4}"));
        }
    }
    outcome(pass, format!("{} (all < 0.01)", detail.join("; ")))
}

// 6
fn oracle_vs_sim() -> Result<Outcome> {
    let s = stream(6);
    let law = DegreeLaw::fixed(4)?;
    let (pool, lambda) = w_cm_exponential(4, 1_000_000, 6)?;
    let mut sampler = FiniteVarianceSampler::new(&law, WeightLaw::Exponential, lambda, &pool)?;
    let mut rng = s.labeled("draws").rng();
    let oracle = oracle_pmf(DRAWS, || Ok(sampler.sample(&mut rng)))?;
    let n = 50_000;
    let g = cm_graph(&law, &WeightLaw::Exponential, n, s.labeled("cm"))?;
    let trees = shortest_path_trees(&g, &random_sources(n, 20, s.labeled("src")))?;
    let sim = pooled_tree_degrees(&trees, true)?;
    let tv = oracle.tv_distance(&sim);
    outcome(
        tv < 0.02,
        format!("TV(tree pmf, oracle pmf) = {tv:.4} (< 0.02)"),
    )
}

// 7
fn power_law_preservation() -> Result<Outcome> {
    let s = stream(7);
    let n = 100_000;
    let mut detail = Vec::new();
    let mut pass = true;
    for (i, tau) in [3.5, 2.5].into_iter().enumerate() {
        let gs = s.substream(i as u64);
        let g = cm_graph(
            &DegreeLaw::power_law(tau, 5)?,
            &WeightLaw::Exponential,
            n,
            gs.labeled("cm"),
        )?;
        let truth = DegreeDistribution::from_samples(g.degrees())?;
        let trees = shortest_path_trees(&g, &random_sources(n, 10, gs.labeled("src")))?;
        let tree = pooled_tree_degrees(&trees, true)?;
        let k_min = default_k_min(&truth).max(default_k_min(&tree));
        let a = ccdf_regression(&truth, k_min, None)?;
        let b = ccdf_regression(&tree, k_min, None)?;
        let diff = (a.tau_hat - b.tau_hat).abs();
        pass &= diff < 0.3;
        detail.push(format!(
            "τ={tau}: graph {:.3}, tree {:.3}, |diff| {diff:.3} (k_min {k_min})",
            a.tau_hat, b.tau_hat
        ));
    }
    outcome(pass, format!("{} (< 0.3)", detail.join("; ")))
}

fn mean_deficits(
    sampler: &mut FiniteVarianceSampler,
    grid: &[u64],
    reps: usize,
    s: RngStream,
) -> (Vec<f64>, Vec<f64>) {
    let mut deficits = Vec::new();
    let mut m_medians = Vec::new();
    for &k in grid {
        let mut rng = s.substream(k).rng();
        let mut total = 0.0;
        let mut ms = Vec::with_capacity(reps);
        for _ in 0..reps {
            let (d, m) = sampler.sample_k(k, &mut rng);
            total += (k - d) as f64;
            ms.push(m - (k as f64).ln());
        }
        deficits.push(total / reps as f64);
        m_medians.push(median(&mut ms));
    }
    (deficits, m_medians)
}

// 8
fn rates() -> Result<Outcome> {
    let s = stream(8);
    let grid: Vec<u64> = (6..=14).map(|j| 1u64 << j).collect();
    let kf: Vec<f64> = grid.iter().map(|&k| k as f64).collect();
    let reps = 10_000;
    let cfg = PoolConfig::with_size(200_000);

    let law4 = DegreeLaw::fixed(4)?;
    let (pool, lambda) = w_cm_exponential(4, 200_000, 8)?;
    let mut sampler = FiniteVarianceSampler::new(&law4, WeightLaw::Exponential, lambda, &pool)?;
    let (d2, m2) = mean_deficits(&mut sampler, &grid, reps, s.labeled("lambda2"));
    let fit2 = rate_of_convergence_fit(&kf, &d2)?;

    let (pool, lambda1) = w_cm_exponential(3, 200_000, 9)?;
    let mut sampler = FiniteVarianceSampler::new(
        &DegreeLaw::fixed(3)?,
        WeightLaw::Exponential,
        lambda1,
        &pool,
    )?;
    let (d1, _) = mean_deficits(&mut sampler, &grid, reps, s.labeled("lambda1"));
    let fit1 = rate_of_convergence_fit(&kf, &d1)?;

    let lambda_u = solve_malthusian(3.0, &WeightLaw::Uniform)?;
    let pool = solve_w_cm(
        &law4,
        &WeightLaw::Uniform,
        lambda_u,
        &cfg,
        s.labeled("uniform-pool"),
    )?;
    let mut sampler = FiniteVarianceSampler::new(&law4, WeightLaw::Uniform, lambda_u, &pool)?;
    let (du, _) = mean_deficits(&mut sampler, &grid, reps, s.labeled("uniform"));
    let du_max = du.iter().copied().fold(0.0, f64::max);
    // limit of the mean deficit: ν E[e^{λY}] − 1 with ν = 3
    let du_limit = 3.0 * lambda_u.exp_m1() / lambda_u - 1.0;
    let du_bound = du_limit + UNIFORM_DEFICIT_SLACK;

    let spread = m2.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - m2.iter().copied().fold(f64::INFINITY, f64::min);
    let pass = (0.4..=0.6).contains(&fit2.alpha)
        && fit1.preferred == GrowthModel::Logarithmic
        && du_max <= du_bound
        && spread <= 4.0;
    outcome(
        pass,
        format!(
            "λ=2 α̂ = {:.3} (in [0.4, 0.6]); λ=1 residuals log {:.3e} vs power {:.3e} (log wins: {}); uniform max deficit {du_max:.3} (<= limit {du_limit:.3} + {UNIFORM_DEFICIT_SLACK}); median(M_k - log k) range {spread:.3} (<= 4, i.e. a ±2 band)",
            fit2.alpha,
            fit1.log_residual,
            fit1.power_residual,
            fit1.preferred == GrowthModel::Logarithmic
        ),
    )
}

/// Allowed excess of the uniform-weight deficit over its k → ∞ mean.
const UNIFORM_DEFICIT_SLACK: f64 = 1.0;

// 9
fn infinite_variance() -> Result<Outcome> {
    let s = stream(9);
    let law = DegreeLaw::power_law(2.5, 2)?;
    let rec = solve_v_min_recursion(&law, &PoolConfig::with_size(100_000), s.labeled("rec"))?;
    let series = solve_v_series(&law, 100_000, DEFAULT_SERIES_CUTOFF, s.labeled("series"))?;
    let ks = ks_two_sample(rec.samples(), series.samples())?;
    let mut sampler = InfiniteVarianceSampler::new(&law, &rec);
    let mut rng = s.labeled("draws").rng();
    let k = 10_000u64;
    let reps = 1_000;
    let ratio = (0..reps)
        .map(|_| sampler.sample_k(k, &mut rng) as f64)
        .sum::<f64>()
        / (reps as f64 * k as f64);
    let p = sampler.p_v_exceeds_e(DRAWS, &mut rng);
    outcome(
        ks < 0.02 && (ratio - p).abs() < 0.02,
        format!("KS(min-recursion, series) = {ks:.4} (< 0.02); mean(D̂_k)/k = {ratio:.4} vs p̂ = {p:.4} at k = 1e4 (|diff| < 0.02)"),
    )
}

// 10
fn bfst_identities() -> Result<Outcome> {
    let s = stream(10);
    let a3 = bfst_limit_pmf(3)?;
    let uniform_err = a3[1..]
        .iter()
        .map(|p| (p - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    let sum_err = [3u64, 10, 100]
        .iter()
        .map(|&r| Ok((bfst_limit_pmf(r)?.iter().sum::<f64>() - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let law3 = DegreeLaw::fixed(3)?;
    let zs = [0.25, 0.5, 0.75];
    let gf = zs
        .iter()
        .map(|&z| gf_hatd_deterministic_weights(&law3, z))
        .collect::<Result<Vec<_>>>()?;
    let gf_err = zs
        .iter()
        .zip(&gf)
        .map(|(&z, g)| (g - (1..=3).map(|k| a3[k] * z.powi(k as i32)).sum::<f64>()).abs())
        .fold(0.0, f64::max);
    let mut sampler =
        unit_weight_sampler(&law3, &PoolConfig::with_size(100_000), s.labeled("pool"))?;
    let mut rng = s.labeled("draws").rng();
    let draws: Vec<u64> = (0..DRAWS).map(|_| sampler.sample(&mut rng)).collect();
    let mc_err = zs
        .iter()
        .zip(&gf)
        .map(|(&z, g)| {
            (draws.iter().map(|&d| z.powi(d as i32)).sum::<f64>() / DRAWS as f64 - g).abs()
        })
        .fold(0.0, f64::max);

    let n = 100_000;
    let g3 = cm_graph(&law3, &WeightLaw::Constant, n, s.labeled("r3"))?;
    let trees = random_sources(n, 5, s.labeled("src3"))
        .into_iter()
        .enumerate()
        .map(|(i, src)| bfst(&g3, src, s.labeled("ties").substream(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    drop(g3);
    let tv_bfst = tv_distance(pooled_tree_degrees(&trees, true)?.pmf_slice(), &a3)?;

    let g100 = cm_graph(
        &DegreeLaw::fixed(100)?,
        &WeightLaw::Exponential,
        n,
        s.labeled("r100"),
    )?;
    let trees = shortest_path_trees(&g100, &random_sources(n, 20, s.labeled("src100")))?;
    drop(g100);
    let tree = pooled_tree_degrees(&trees, true)?;
    // P(deg > k) against 2^{-k}, the tail of Geometric(1/2) on {1, 2, ...}
    let rel = (1..=12u64)
        .map(|k| (tree.ccdf(k + 1) / 0.5f64.powi(k as i32) - 1.0).abs())
        .fold(0.0, f64::max);

    let pass = uniform_err < 1e-10
        && sum_err < 1e-10
        && gf_err < 1e-6
        && mc_err < 0.005
        && tv_bfst < 0.02
        && rel <= 0.5;
    outcome(
        pass,
        format!(
            "|a_k^(3) - 1/3| = {uniform_err:.1e}, |Σa - 1| = {sum_err:.1e} (< 1e-10); gf vs Σa z^k {gf_err:.1e} (< 1e-6); Monte Carlo vs gf {mc_err:.1e} (< 0.005); BFST r=3 TV {tv_bfst:.4} (< 0.02); r=100 max rel. dev. of P(deg>k) from 2^-k, k<=12: {rel:.3} (<= 0.5)"
        ),
    )
}

// 11
fn excision() -> Result<Outcome> {
    let s = stream(11);
    let law = DegreeLaw::fixed(4)?;
    let n = 2_000;
    let mut failures = 0;
    let mut unreachable = 0;
    for i in 0..500u64 {
        let ts = s.substream(i);
        let g = cm_graph(&law, &WeightLaw::Exponential, n, ts.labeled("cm"))?;
        let mut rng = ts.labeled("pair").rng();
        let src = rng.random_range(0..n) as VertexId;
        let target = loop {
            let t = rng.random_range(0..n) as VertexId;
            if t != src {
                break t;
            }
        };
        let tree = shortest_path_tree(&g, src)?;
        let direct = tree.tree_degree(target);
        match degree_via_excision(&g, src, target)? {
            ExcisionOutcome::Degree(d) if d == direct => {}
            ExcisionOutcome::Unreachable if !tree.is_reached(target) => unreachable += 1,
            _ => failures += 1,
        }
    }
    outcome(
        failures == 0,
        format!("500 triples, {failures} failures ({unreachable} unreachable targets agreed)"),
    )
}

// 12
fn recentering() -> Result<Outcome> {
    let s = stream(12);
    let small =
        recentered_path_lengths(1_000, 1.0, 1_200, 15, None, 100_000_000, s.labeled("n1000"))?;
    let large = recentered_path_lengths(4_000, 1.0, 40, 30, None, 100_000_000, s.labeled("n4000"))?;
    let ks = ks_two_sample(&small.values, &large.values)?;
    let mean = mean_of(&small.values);
    outcome(
        ks < 0.05 && (mean - EULER_GAMMA).abs() < 0.05,
        format!(
            "KS(n=1e3, n=4e3) = {ks:.4} (< 0.05); mean at n=1e3 = {mean:.4} vs γ = {EULER_GAMMA:.4} (within 0.05); mean at n=4e3 = {:.4}",
            mean_of(&large.values)
        ),
    )
}

type Check = (u32, &'static str, fn() -> Result<Outcome>);

const CHECKS: [Check; 12] = [
    (1, "handshake exactness", handshake),
    (2, "geometric law at s=1", geometric_s1),
    (3, "E[D̂] = 2", mean_two),
    (4, "W closed forms", w_closed_forms),
    (5, "M identities", m_identities),
    (6, "oracle vs simulation", oracle_vs_sim),
    (7, "power-law preservation", power_law_preservation),
    (8, "rate of convergence", rates),
    (9, "infinite-variance laws", infinite_variance),
    (10, "BFST identities", bfst_identities),
    (11, "excision identity", excision),
    (12, "recentering stabilization", recentering),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name, run) in CHECKS {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id:>2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
