//! The `run` experiments. Each writes `<name>.csv` (tables) and
//! `<name>-stats.csv` (statistics) into the output directory.

use std::fs;

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;

use fpp_core::analysis::{
    ccdf_regression, default_k_min, geometric_pmf, hill_estimate, ks_two_sample,
    rate_of_convergence_fit, recentering_check, recentering_oracle_samples, tv_distance,
    DegreeDistribution, GrowthModel, RecenteringConfig,
};
use fpp_core::graph::{build_configuration_model, draw_degree_sequence};
use fpp_core::oracles::{
    bfst_limit_pmf, gf_hatd_deterministic_weights, solve_v_min_recursion, solve_v_series,
    solve_w_cm, solve_w_complete, unit_weight_sampler, CompleteGraphSampler, FiniteVarianceSampler,
    InfiniteVarianceSampler, LimitParams, DEFAULT_SERIES_CUTOFF, DEFAULT_TRUNCATION,
};
use fpp_core::spt::{pooled_tree_degrees, shortest_path_trees};
use fpp_core::{
    bfst, complete_graph_tree, CompleteGraph, DegreeLaw, PoolConfig, RngStream, ShortestPathTree,
    VertexId, WeightLaw, WeightedMultiGraph,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{fmt_f, CsvFile, Provenance, Stats};
use crate::CliResult;

/// Runs the configured experiment and returns its statistics.
pub fn run(cfg: &ExperimentConfig) -> CliResult<Stats> {
    fs::create_dir_all(&cfg.output_dir)?;
    let prov = Provenance::from_config(cfg);
    let root = RngStream::new(cfg.seed, 0);
    let mut stats = Stats::new(cfg.experiment.name(), cfg.seed);
    let table = cfg.output_dir.join(format!("{}.csv", cfg.experiment));
    let mut ctx = Ctx {
        cfg,
        prov: &prov,
        root,
        stats: &mut stats,
        table: &table,
    };
    match cfg.experiment {
        Experiment::Fig1Powerlaw => fig1_powerlaw(&mut ctx)?,
        Experiment::Fig2Regular => fig2_regular(&mut ctx)?,
        Experiment::CompleteSGrid => complete_s_grid(&mut ctx)?,
        Experiment::OracleVsSim => oracle_vs_sim(&mut ctx)?,
        Experiment::RateOfConv => rate_of_conv(&mut ctx)?,
        Experiment::BfstIdentity => bfst_identity(&mut ctx)?,
        Experiment::Recentering => recentering(&mut ctx)?,
        Experiment::Infvar => infvar(&mut ctx)?,
    }
    let stats_path = cfg.output_dir.join(format!("{}-stats.csv", cfg.experiment));
    stats.write(Some(&stats_path), &prov)?;
    Ok(stats)
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    prov: &'a Provenance,
    root: RngStream,
    stats: &'a mut Stats,
    table: &'a std::path::Path,
}

impl Ctx<'_> {
    fn csv(&self, columns: &[&str]) -> CliResult<CsvFile> {
        Ok(CsvFile::create(Some(self.table), self.prov, columns)?)
    }
}

pub fn cm_graph(
    law: &DegreeLaw,
    weight: &WeightLaw,
    n: usize,
    stream: RngStream,
) -> CliResult<WeightedMultiGraph> {
    let seq = draw_degree_sequence(law, n, stream.labeled("degrees"))?;
    let mut g = build_configuration_model(&seq, stream.labeled("pairing"))?;
    g.attach_weights(weight, stream.labeled("weights"));
    Ok(g)
}

/// `count` distinct uniform vertices.
pub fn random_sources(n: usize, count: usize, stream: RngStream) -> CliResult<Vec<VertexId>> {
    if count == 0 || count > n {
        return Err(crate::CliError::Config(format!(
            "need 1..={n} sources, got {count}"
        )));
    }
    let mut rng = stream.rng();
    Ok(sample_indices(&mut rng, n, count)
        .into_iter()
        .map(|v| v as VertexId)
        .collect())
}

fn tree_law(trees: &[ShortestPathTree]) -> CliResult<DegreeDistribution> {
    Ok(pooled_tree_degrees(trees, true)?)
}

/// Pmf of draws from a degree sampler.
fn draw_pmf(
    count: usize,
    mut draw: impl FnMut() -> fpp_core::Result<u64>,
) -> CliResult<DegreeDistribution> {
    let mut counts: Vec<u64> = Vec::new();
    for _ in 0..count {
        let d = draw()? as usize;
        if d >= counts.len() {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    Ok(DegreeDistribution::from_counts(&counts)?)
}

fn pmf_rows(csv: &mut CsvFile, prefix: &[String], dist: &DegreeDistribution) -> CliResult<()> {
    for (k, p, q) in dist.support() {
        let mut row = prefix.to_vec();
        row.extend([k.to_string(), fmt_f(p), fmt_f(q)]);
        csv.row(&row)?;
    }
    Ok(())
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn fig1_powerlaw(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let n: usize = cfg.get("model.n")?;
    let law = DegreeLaw::power_law(cfg.get("model.tau")?, cfg.get("model.d_min")?)?;
    let weight: WeightLaw = cfg.get("model.weight")?;
    let g = cm_graph(&law, &weight, n, ctx.root.labeled("graph"))?;
    let sources = random_sources(n, cfg.get("run.replications")?, ctx.root.labeled("sources"))?;
    let trees = shortest_path_trees(&g, &sources)?;
    let truth = DegreeDistribution::from_samples(g.degrees())?;
    let tree = tree_law(&trees)?;

    let mut csv = ctx.csv(&["series", "k", "p", "q"])?;
    pmf_rows(&mut csv, &["truth".into()], &truth)?;
    pmf_rows(&mut csv, &["tree".into()], &tree)?;
    csv.finish()?;

    let k_min = default_k_min(&truth).max(default_k_min(&tree));
    let st = &mut *ctx.stats;
    st.push("k_min", k_min as f64);
    for (name, dist) in [("truth", &truth), ("tree", &tree)] {
        let fit = ccdf_regression(dist, k_min, None)?;
        st.push_se(format!("tau_{name}"), fit.tau_hat, fit.stderr);
        if let Ok(h) = hill_estimate(dist, k_min) {
            st.push_se(format!("tau_hill_{name}"), h.tau_hat, h.stderr);
        }
    }
    let diff = st.get("tau_truth").unwrap_or(f64::NAN) - st.get("tau_tree").unwrap_or(f64::NAN);
    st.push("tau_abs_diff", diff.abs());
    let reached = trees
        .iter()
        .map(|t| t.reached() as f64 / n as f64)
        .collect::<Vec<_>>();
    let (m, se) = mean_and_se(&reached);
    st.push_se("reached_fraction", m, se);
    Ok(())
}

fn fig2_regular(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let n: usize = cfg.get("model.n")?;
    let law = DegreeLaw::fixed(cfg.get("model.r")?)?;
    let weight: WeightLaw = cfg.get("model.weight")?;
    let k_max: u64 = cfg.get("analysis.k_max")?;
    let g = cm_graph(&law, &weight, n, ctx.root.labeled("graph"))?;
    let sources = random_sources(n, cfg.get("run.replications")?, ctx.root.labeled("sources"))?;
    let trees = shortest_path_trees(&g, &sources)?;
    let tree = tree_law(&trees)?;

    let mut csv = ctx.csv(&["k", "p", "q_ge", "q_gt", "two_pow_minus_k"])?;
    let mut worst: f64 = 0.0;
    for k in 1..=tree.max_degree() {
        let reference = 0.5f64.powi(k as i32);
        let q_gt = tree.ccdf(k + 1);
        if k <= k_max {
            worst = worst.max((q_gt / reference - 1.0).abs());
        }
        csv.row(&[
            k.to_string(),
            fmt_f(tree.pmf(k)),
            fmt_f(tree.ccdf(k)),
            fmt_f(q_gt),
            fmt_f(reference),
        ])?;
    }
    csv.finish()?;
    let st = &mut *ctx.stats;
    st.push("max_rel_dev_q_gt_vs_two_pow_minus_k", worst);
    st.push(
        "tv_vs_geometric_half",
        tv_distance(
            tree.pmf_slice(),
            &geometric_pmf(0.5, tree.max_degree().max(2)),
        )?,
    );
    st.push("mean_tree_degree", tree.mean());
    Ok(())
}

fn complete_s_grid(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let n: usize = cfg.get("model.n")?;
    let grid: Vec<f64> = cfg.list("model.s")?;
    let reps: usize = cfg.get("run.replications")?;
    let budget: u64 = cfg.get("run.edge_budget")?;
    let pool_cfg = PoolConfig::with_size(cfg.get("oracle.pool_size")?);
    let draws: usize = cfg.get("oracle.draws")?;

    let mut csv = ctx.csv(&["s", "series", "k", "p", "q"])?;
    for (i, &s) in grid.iter().enumerate() {
        let stream = ctx.root.substream(i as u64);
        let g = CompleteGraph::build(n, s, stream.labeled("graph"), budget)?;
        let sources = random_sources(n, reps, stream.labeled("sources"))?;
        let trees = sources
            .par_iter()
            .map(|&src| complete_graph_tree(&g, src))
            .collect::<fpp_core::Result<Vec<_>>>()?;
        drop(g);
        let sim = tree_law(&trees)?;

        let pool = solve_w_complete(s, DEFAULT_TRUNCATION, &pool_cfg, stream.labeled("pool"))?;
        let mut sampler = CompleteGraphSampler::new(s, &pool)?;
        let mut rng = stream.labeled("draws").rng();
        let oracle = draw_pmf(draws, || sampler.sample(&mut rng))?;

        pmf_rows(&mut csv, &[s.to_string(), "tree".into()], &sim)?;
        pmf_rows(&mut csv, &[s.to_string(), "oracle".into()], &oracle)?;
        let st = &mut *ctx.stats;
        st.push(format!("tv_tree_oracle_s{s}"), sim.tv_distance(&oracle));
        st.push(format!("mean_oracle_s{s}"), oracle.mean());
        st.push(format!("w_pool_mean_s{s}"), pool.mean());
        if s == 1.0 {
            let geo = geometric_pmf(0.5, 64);
            st.push(
                "tv_oracle_geometric_s1",
                tv_distance(oracle.pmf_slice(), &geo)?,
            );
            st.push("tv_tree_geometric_s1", tv_distance(sim.pmf_slice(), &geo)?);
        }
    }
    csv.finish()?;
    Ok(())
}

/// Oracle pmf for a configuration-model degree law, choosing the regime from the law.
fn cm_oracle(
    law: &DegreeLaw,
    weight: &WeightLaw,
    pool_cfg: &PoolConfig,
    draws: usize,
    stream: RngStream,
    stats: &mut Stats,
) -> CliResult<DegreeDistribution> {
    let mut rng = stream.labeled("draws").rng();
    if law.size_biased()?.infinite_mean {
        if *weight != WeightLaw::Exponential {
            return Err(crate::CliError::Config(
                "infinite-variance degree laws need exponential weights".into(),
            ));
        }
        let v = solve_v_min_recursion(law, pool_cfg, stream.labeled("pool"))?;
        let mut sampler = InfiniteVarianceSampler::new(law, &v);
        return draw_pmf(draws, || Ok(sampler.sample(&mut rng)));
    }
    let params = LimitParams::configuration_model(law, weight)?;
    stats.push("lambda", params.lambda);
    stats.push("nu", params.nu);
    let pool = solve_w_cm(law, weight, params.lambda, pool_cfg, stream.labeled("pool"))?;
    stats.push("w_pool_mean", pool.mean());
    let mut sampler = FiniteVarianceSampler::new(law, *weight, params.lambda, &pool)?;
    draw_pmf(draws, || Ok(sampler.sample(&mut rng)))
}

fn oracle_vs_sim(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let n: usize = cfg.get("model.n")?;
    let law: DegreeLaw = cfg.get("model.degree")?;
    let weight: WeightLaw = cfg.get("model.weight")?;
    let g = cm_graph(&law, &weight, n, ctx.root.labeled("graph"))?;
    let sources = random_sources(n, cfg.get("run.replications")?, ctx.root.labeled("sources"))?;
    let trees = shortest_path_trees(&g, &sources)?;
    drop(g);
    let sim = tree_law(&trees)?;
    let pool_cfg = PoolConfig::with_size(cfg.get("oracle.pool_size")?);
    let oracle = cm_oracle(
        &law,
        &weight,
        &pool_cfg,
        cfg.get("oracle.draws")?,
        ctx.root.labeled("oracle"),
        ctx.stats,
    )?;

    let mut csv = ctx.csv(&["series", "k", "p", "q"])?;
    pmf_rows(&mut csv, &["tree".into()], &sim)?;
    pmf_rows(&mut csv, &["oracle".into()], &oracle)?;
    csv.finish()?;
    let st = &mut *ctx.stats;
    st.push("tv_tree_oracle", sim.tv_distance(&oracle));
    st.push("mean_tree", sim.mean());
    st.push("mean_oracle", oracle.mean());
    Ok(())
}

fn rate_of_conv(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let law: DegreeLaw = cfg.get("model.degree")?;
    let weight: WeightLaw = cfg.get("model.weight")?;
    let reps: usize = cfg.get("run.replications")?;
    let grid: Vec<u64> = cfg.list("analysis.k_grid")?;
    let params = LimitParams::configuration_model(&law, &weight)?;
    let pool_cfg = PoolConfig::with_size(cfg.get("oracle.pool_size")?);
    let pool = solve_w_cm(
        &law,
        &weight,
        params.lambda,
        &pool_cfg,
        ctx.root.labeled("pool"),
    )?;
    let mut sampler = FiniteVarianceSampler::new(&law, weight, params.lambda, &pool)?;

    let mut csv = ctx.csv(&["k", "mean_deficit", "stderr", "median_m_minus_log_k"])?;
    let mut deficits = Vec::with_capacity(grid.len());
    for &k in &grid {
        let mut rng = ctx.root.labeled("deficits").substream(k).rng();
        let mut d = Vec::with_capacity(reps);
        let mut m = Vec::with_capacity(reps);
        for _ in 0..reps {
            let (hat, mk) = sampler.sample_k(k, &mut rng);
            d.push(k as f64 - hat as f64);
            m.push(mk - (k as f64).ln());
        }
        let (mean, se) = mean_and_se(&d);
        deficits.push(mean);
        csv.row(&[k.to_string(), fmt_f(mean), fmt_f(se), fmt_f(median(&mut m))])?;
    }
    csv.finish()?;
    let kf: Vec<f64> = grid.iter().map(|&k| k as f64).collect();
    let fit = rate_of_convergence_fit(&kf, &deficits)?;
    let st = &mut *ctx.stats;
    st.push("lambda", params.lambda);
    st.push_se("alpha", fit.alpha, fit.alpha_stderr);
    st.push("power_residual", fit.power_residual);
    st.push("log_residual", fit.log_residual);
    st.push(
        "log_model_preferred",
        f64::from(u8::from(fit.preferred == GrowthModel::Logarithmic)),
    );
    Ok(())
}

fn bfst_identity(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let n: usize = cfg.get("model.n")?;
    let r: u64 = cfg.get("model.r")?;
    let law = DegreeLaw::fixed(r)?;
    let a = bfst_limit_pmf(r)?;
    let st = &mut *ctx.stats;
    st.push("sum_a_minus_one", a.iter().sum::<f64>() - 1.0);

    let mut sampler = unit_weight_sampler(
        &law,
        &PoolConfig::with_size(cfg.get("oracle.pool_size")?),
        ctx.root.labeled("pool"),
    )?;
    let mut rng = ctx.root.labeled("draws").rng();
    let draws = draw_pmf(cfg.get("oracle.draws")?, || Ok(sampler.sample(&mut rng)))?;
    for z in cfg.list::<f64>("analysis.z")? {
        let gf = gf_hatd_deterministic_weights(&law, z)?;
        let series: f64 = a
            .iter()
            .enumerate()
            .map(|(k, p)| p * z.powi(k as i32))
            .sum();
        let mc: f64 = draws.support().map(|(k, p, _)| p * z.powi(k as i32)).sum();
        st.push(format!("gf_z{z}"), gf);
        st.push(format!("gf_minus_series_z{z}"), gf - series);
        st.push(format!("monte_carlo_minus_gf_z{z}"), mc - gf);
    }

    let g = cm_graph(&law, &WeightLaw::Constant, n, ctx.root.labeled("graph"))?;
    let sources = random_sources(n, cfg.get("run.replications")?, ctx.root.labeled("sources"))?;
    let trees = sources
        .par_iter()
        .enumerate()
        .map(|(i, &src)| bfst(&g, src, ctx.root.labeled("ties").substream(i as u64)))
        .collect::<fpp_core::Result<Vec<_>>>()?;
    let sim = tree_law(&trees)?;
    st.push("tv_bfst_limit", tv_distance(sim.pmf_slice(), &a)?);

    let mut csv = ctx.csv(&["k", "a_k", "bfst_p", "unit_weight_oracle_p"])?;
    let k_hi = (r as usize).max(sim.max_degree() as usize);
    for k in 1..=k_hi {
        csv.row(&[
            k.to_string(),
            fmt_f(a.get(k).copied().unwrap_or(0.0)),
            fmt_f(sim.pmf(k as u64)),
            fmt_f(draws.pmf(k as u64)),
        ])?;
    }
    csv.finish()?;
    Ok(())
}

fn recentering(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let s: f64 = cfg.get("model.s")?;
    let mut rc = RecenteringConfig::new(s, cfg.list("model.n_grid")?);
    rc.graphs = cfg.get("run.replications")?;
    rc.sources_per_graph = cfg.get("run.sources_per_graph")?;
    rc.targets_per_source = cfg.optional("run.targets_per_source")?;
    rc.edge_budget = cfg.get("run.edge_budget")?;
    let pool_cfg = PoolConfig::with_size(cfg.get("oracle.pool_size")?);
    let pool = solve_w_complete(s, DEFAULT_TRUNCATION, &pool_cfg, ctx.root.labeled("pool"))?;
    let mut rng = ctx.root.labeled("oracle").rng();
    let reference = recentering_oracle_samples(&pool, cfg.get("oracle.draws")?, &mut rng)?;
    let report = recentering_check(&rc, Some(&reference), ctx.root.labeled("paths"))?;

    const PROBS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    let mut csv = ctx.csv(&["n", "p", "quantile"])?;
    for sample in &report.samples {
        for p in PROBS {
            csv.row(&[
                sample.n.to_string(),
                p.to_string(),
                fmt_f(sample.quantile(p)),
            ])?;
        }
    }
    let mut sorted = reference.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    for p in PROBS {
        let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
        csv.row(&["limit".into(), p.to_string(), fmt_f(sorted[idx])])?;
    }
    csv.finish()?;

    let st = &mut *ctx.stats;
    for sample in &report.samples {
        // pairs within a graph are correlated: stderr from per-graph means
        let per_graph: Vec<f64> = sample
            .values
            .chunks(sample.values.len() / rc.graphs)
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
            .collect();
        let (m, se) = mean_and_se(&per_graph);
        st.push_se(format!("mean_n{}", sample.n), m, se);
    }
    for (w, ks) in report.samples.windows(2).zip(&report.consecutive_ks) {
        st.push(format!("ks_n{}_n{}", w[0].n, w[1].n), *ks);
    }
    if let (Some(off), Some(ks)) = (report.offset, report.reference_ks) {
        st.push("median_offset_vs_limit", off);
        st.push("ks_vs_limit", ks);
    }
    let (m, se) = mean_and_se(&reference);
    st.push_se("limit_mean", m, se);
    Ok(())
}

fn infvar(ctx: &mut Ctx) -> CliResult<()> {
    let cfg = ctx.cfg;
    let law = DegreeLaw::power_law(cfg.get("model.tau")?, cfg.get("model.d_min")?)?;
    let size: usize = cfg.get("oracle.pool_size")?;
    let draws: usize = cfg.get("oracle.draws")?;
    let rec = solve_v_min_recursion(
        &law,
        &PoolConfig::with_size(size),
        ctx.root.labeled("recursion"),
    )?;
    let series = solve_v_series(
        &law,
        size,
        DEFAULT_SERIES_CUTOFF,
        ctx.root.labeled("series"),
    )?;
    let mut sampler = InfiniteVarianceSampler::new(&law, &rec);
    let mut rng = ctx.root.labeled("draws").rng();
    let hat = draw_pmf(draws, || Ok(sampler.sample(&mut rng)))?;
    let k: u64 = cfg.get("analysis.k")?;
    let k_reps: usize = cfg.get("analysis.k_reps")?;
    let ratios: Vec<f64> = (0..k_reps)
        .map(|_| sampler.sample_k(k, &mut rng) as f64 / k as f64)
        .collect();
    let p = sampler.p_v_exceeds_e(draws, &mut rng);

    let mut csv = ctx.csv(&["series", "k", "p", "q"])?;
    pmf_rows(&mut csv, &["oracle".into()], &hat)?;
    csv.finish()?;
    let st = &mut *ctx.stats;
    st.push(
        "ks_v_recursion_series",
        ks_two_sample(rec.samples(), series.samples())?,
    );
    st.push("v_pool_mean", rec.mean());
    st.push("mean_hat_d", hat.mean());
    let (m, se) = mean_and_se(&ratios);
    st.push_se(format!("mean_hat_d_k_over_k_k{k}"), m, se);
    st.push("p_v_exceeds_e", p);
    Ok(())
}
