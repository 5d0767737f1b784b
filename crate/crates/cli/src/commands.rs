//! Pipeline stages: `generate`, `spt`, `bfst`, `pool`, `sample`, `analyze`.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use fpp_core::analysis::{
    estimate_tail_exponent, geometric_pmf, ks_one_sample, ks_two_sample, tv_distance,
    DegreeDistribution,
};
use fpp_core::oracles::{
    bfst_limit_pmf, solve_v_min_recursion, solve_v_series, solve_w_cm, solve_w_complete,
    unit_weight_sampler, CompleteGraphSampler, FiniteVarianceSampler, InfiniteVarianceSampler,
    LimitParams, DEFAULT_SERIES_CUTOFF,
};
use fpp_core::spt::pooled_tree_degrees;
use fpp_core::{
    bfst, shortest_path_tree, CompleteGraph, DegreeLaw, PoolConfig, PoolTarget, RngStream,
    SamplePool, ShortestPathTree, VertexId, WeightLaw, WeightedMultiGraph,
};

use crate::experiments::{cm_graph, random_sources};
use crate::output::{fmt_f, CsvFile, Provenance, Stats};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    ConfigurationModel,
    Complete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateOpts {
    pub kind: GraphKind,
    pub n: usize,
    pub degree: Option<DegreeLaw>,
    pub weight: WeightLaw,
    pub s: f64,
    pub edge_budget: u64,
}

pub fn generate(opts: &GenerateOpts, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let root = RngStream::new(seed, 0);
    let (g, settings) = match opts.kind {
        GraphKind::ConfigurationModel => {
            let law = opts
                .degree
                .as_ref()
                .ok_or_else(|| CliError::Config("--cm needs a degree law".into()))?;
            let g = cm_graph(law, &opts.weight, opts.n, root.labeled("graph"))?;
            (
                g,
                vec![
                    format!("model=cm"),
                    format!("degree={law}"),
                    format!("weight={}", opts.weight),
                ],
            )
        }
        GraphKind::Complete => {
            let g = CompleteGraph::build(opts.n, opts.s, root.labeled("graph"), opts.edge_budget)?;
            (
                g.to_multigraph()?,
                vec![format!("model=complete"), format!("s={}", opts.s)],
            )
        }
    };
    let mut settings = settings;
    settings.push(format!("n={}", opts.n));
    let prov = Provenance::new("generate", seed, settings);
    let mut out = output(out)?;
    prov.write_header(&mut out)?;
    g.write_edge_list_to(&mut out)?;
    out.flush()?;
    Ok(())
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn std::io::Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(std::io::BufWriter::new(File::create(p)?)),
        _ => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Random(usize),
    Fixed(VertexId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeOpts {
    pub graph: PathBuf,
    pub source: SourceSpec,
    pub breadth_first: bool,
    /// Per-vertex table of the first tree.
    pub table: Option<PathBuf>,
}

/// Graph degrees and pooled tree degrees as `series,k,p,q`.
pub fn trees(opts: &TreeOpts, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let g =
        WeightedMultiGraph::read_edge_list(&opts.graph).map_err(CliError::input(&opts.graph))?;
    let n = g.degrees().len();
    let root = RngStream::new(seed, 0);
    let sources = match opts.source {
        SourceSpec::Random(count) => random_sources(n, count, root.labeled("sources"))?,
        SourceSpec::Fixed(v) => vec![v],
    };
    let trees = sources
        .iter()
        .enumerate()
        .map(|(i, &src)| {
            if opts.breadth_first {
                bfst(&g, src, root.labeled("ties").substream(i as u64))
            } else {
                shortest_path_tree(&g, src)
            }
        })
        .collect::<fpp_core::Result<Vec<ShortestPathTree>>>()?;
    let name = if opts.breadth_first { "bfst" } else { "spt" };
    let prov = Provenance::new(
        name,
        seed,
        vec![
            format!("graph={}", opts.graph.display()),
            format!(
                "sources={}",
                sources
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        ],
    );
    if let Some(path) = &opts.table {
        let mut file = std::io::BufWriter::new(File::create(path)?);
        prov.write_header(&mut file)?;
        trees[0].write_table(&mut file)?;
        std::io::Write::flush(&mut file)?;
    }
    let graph_law = DegreeDistribution::from_samples(g.degrees())?;
    let tree_law = pooled_tree_degrees(&trees, true)?;
    let mut csv = CsvFile::create(out, &prov, &["series", "k", "p", "q"])?;
    csv.raw(&graph_law.to_csv_rows("graph"))?;
    csv.raw(&tree_law.to_csv_rows("tree"))?;
    csv.finish()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolOpts {
    pub target: PoolTarget,
    pub s: Option<f64>,
    pub degree: Option<DegreeLaw>,
    pub weight: WeightLaw,
    pub truncation: f64,
    pub config: PoolConfig,
    /// For `v`: draw the series representation instead of the min-recursion.
    pub series: bool,
}

pub fn build_pool(opts: &PoolOpts, stream: RngStream) -> CliResult<SamplePool> {
    let need_degree = || {
        opts.degree
            .clone()
            .ok_or_else(|| CliError::Config(format!("pool target {} needs --degree", opts.target)))
    };
    Ok(match opts.target {
        PoolTarget::WComplete => {
            let s = opts
                .s
                .ok_or_else(|| CliError::Config("pool target w-complete needs --s".into()))?;
            solve_w_complete(s, opts.truncation, &opts.config, stream)?
        }
        PoolTarget::WConfigurationModel => {
            let law = need_degree()?;
            let params = LimitParams::configuration_model(&law, &opts.weight)?;
            solve_w_cm(&law, &opts.weight, params.lambda, &opts.config, stream)?
        }
        PoolTarget::V if opts.series => solve_v_series(
            &need_degree()?,
            opts.config.size,
            DEFAULT_SERIES_CUTOFF,
            stream,
        )?,
        PoolTarget::V => solve_v_min_recursion(&need_degree()?, &opts.config, stream)?,
    })
}

pub fn pool(opts: &PoolOpts, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let p = build_pool(opts, RngStream::new(seed, 0).labeled("pool"))?;
    let mut settings = vec![
        format!("target={}", opts.target),
        format!("size={}", opts.config.size),
    ];
    if let Some(s) = opts.s {
        settings.push(format!("s={s}"));
    }
    if let Some(d) = &opts.degree {
        settings.push(format!("degree={d}"));
    }
    settings.push(format!("weight={}", opts.weight));
    let mut out = output(out)?;
    Provenance::new("pool", seed, settings).write_header(&mut out)?;
    p.write_to(&mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// `D̂` on the complete graph with weights `E^s`.
    HatDComplete,
    /// `D̂` (or `D̂_k`) on the configuration model, finite variance.
    HatDCm,
    /// `D̂` (or `D̂_k`) on the configuration model, infinite variance.
    HatDInfvar,
    /// `D̂` under unit weights.
    HatDUnit,
    /// `M` on the complete graph.
    MComplete,
    /// Resampled pool values (`W` or `V`).
    PoolValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleOpts {
    pub kind: SampleKind,
    pub count: usize,
    pub k: Option<u64>,
    pub pool_file: Option<PathBuf>,
    pub pool: PoolOpts,
}

pub fn sample(opts: &SampleOpts, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let root = RngStream::new(seed, 0);
    let pool = match &opts.pool_file {
        Some(path) => SamplePool::read(path).map_err(CliError::input(path))?,
        None => build_pool(&pool_for(opts)?, root.labeled("pool"))?,
    };
    let mut rng = root.labeled("draws").rng();
    let law = || {
        opts.pool
            .degree
            .clone()
            .or_else(|| pool.meta.degree_law.as_deref().and_then(|d| d.parse().ok()))
            .ok_or_else(|| CliError::Config("sampler needs --degree".into()))
    };
    let values: Vec<String> = match opts.kind {
        SampleKind::HatDComplete | SampleKind::MComplete => {
            let s = opts
                .pool
                .s
                .or(pool.meta.s)
                .ok_or_else(|| CliError::Config("need --s".into()))?;
            let mut sampler = CompleteGraphSampler::new(s, &pool)?;
            (0..opts.count)
                .map(|_| {
                    sampler
                        .sample_with_m(&mut rng)
                        .map(|(d, m)| match opts.kind {
                            SampleKind::MComplete => fmt_f(m),
                            _ => d.to_string(),
                        })
                })
                .collect::<fpp_core::Result<_>>()?
        }
        SampleKind::HatDCm => {
            let law = law()?;
            let lambda = LimitParams::configuration_model(&law, &opts.pool.weight)?.lambda;
            let mut sampler = FiniteVarianceSampler::new(&law, opts.pool.weight, lambda, &pool)?;
            (0..opts.count)
                .map(|_| match opts.k {
                    Some(k) => sampler.sample_k(k, &mut rng).0.to_string(),
                    None => sampler.sample(&mut rng).to_string(),
                })
                .collect()
        }
        SampleKind::HatDInfvar => {
            let law = law()?;
            let mut sampler = InfiniteVarianceSampler::new(&law, &pool);
            (0..opts.count)
                .map(|_| match opts.k {
                    Some(k) => sampler.sample_k(k, &mut rng).to_string(),
                    None => sampler.sample(&mut rng).to_string(),
                })
                .collect()
        }
        SampleKind::HatDUnit => {
            let mut sampler =
                unit_weight_sampler(&law()?, &opts.pool.config, root.labeled("unit-pool"))?;
            (0..opts.count)
                .map(|_| sampler.sample(&mut rng).to_string())
                .collect()
        }
        SampleKind::PoolValue => (0..opts.count)
            .map(|_| fmt_f(pool.draw(&mut rng)))
            .collect(),
    };
    let mut settings = vec![
        format!("sampler={:?}", opts.kind),
        format!("count={}", opts.count),
    ];
    if let Some(k) = opts.k {
        settings.push(format!("k={k}"));
    }
    match &opts.pool_file {
        Some(p) => settings.push(format!("pool_file={}", p.display())),
        None => settings.push(format!("pool_size={}", opts.pool.config.size)),
    }
    let prov = Provenance::new("sample", seed, settings);
    let mut csv = CsvFile::create(out, &prov, &["value"])?;
    for v in values {
        csv.row(&[v])?;
    }
    csv.finish()?;
    Ok(())
}

/// The pool a sampler draws from when no pool file is given.
fn pool_for(opts: &SampleOpts) -> CliResult<PoolOpts> {
    let mut p = opts.pool.clone();
    p.target = match opts.kind {
        SampleKind::HatDComplete | SampleKind::MComplete => PoolTarget::WComplete,
        SampleKind::HatDCm | SampleKind::HatDUnit => PoolTarget::WConfigurationModel,
        SampleKind::HatDInfvar => PoolTarget::V,
        SampleKind::PoolValue => opts.pool.target,
    };
    if opts.kind == SampleKind::HatDUnit {
        p.weight = WeightLaw::Constant;
    }
    Ok(p)
}

/// Numbers read from a CSV: either a `value` column or a `k,p` pmf table.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Values(Vec<f64>),
    Pmf(DegreeDistribution),
}

impl Input {
    pub fn read(path: &Path, series: Option<&str>) -> CliResult<Input> {
        let file =
            File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::read_from(BufReader::new(file), series).map_err(|e| CliError::Input {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn read_from<R: BufRead>(input: R, series: Option<&str>) -> fpp_core::Result<Input> {
        use fpp_core::Error;
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut header: Option<Vec<String>> = None;
        let mut values = Vec::new();
        let mut pmf: Vec<f64> = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = t.split(',').map(str::trim).collect();
            let Some(cols) = &header else {
                header = Some(fields.iter().map(|s| s.to_string()).collect());
                continue;
            };
            if fields.len() != cols.len() {
                return Err(perr(
                    lineno,
                    format!("expected {} fields, got {}", cols.len(), fields.len()),
                ));
            }
            let col = |name: &str| cols.iter().position(|c| c == name);
            let num = |j: usize| {
                fields[j].parse::<f64>().map_err(|_| {
                    perr(
                        lineno,
                        format!("column '{}': bad number '{}'", cols[j], fields[j]),
                    )
                })
            };
            if let Some(j) = col("value") {
                values.push(num(j)?);
            } else if let (Some(jk), Some(jp)) = (col("k"), col("p")) {
                if let (Some(js), Some(want)) = (col("series"), series) {
                    if fields[js] != want {
                        continue;
                    }
                }
                let k = fields[jk]
                    .parse::<usize>()
                    .map_err(|_| perr(lineno, format!("bad degree '{}'", fields[jk])))?;
                if k >= pmf.len() {
                    pmf.resize(k + 1, 0.0);
                }
                pmf[k] += num(jp)?;
            } else {
                return Err(perr(
                    lineno,
                    "need a 'value' column or 'k,p' columns".into(),
                ));
            }
        }
        match header {
            None => Err(perr(0, "no header row".into())),
            Some(_) if !values.is_empty() => Ok(Input::Values(values)),
            Some(_) if !pmf.is_empty() => Ok(Input::Pmf(DegreeDistribution::from_pmf(pmf)?)),
            Some(_) => Err(Error::InsufficientData("no data rows".into())),
        }
    }

    fn pmf(&self) -> fpp_core::Result<DegreeDistribution> {
        match self {
            Input::Pmf(p) => Ok(p.clone()),
            Input::Values(v) => {
                let ints = v
                    .iter()
                    .map(|&x| {
                        if x >= 0.0 && x.fract() == 0.0 {
                            Ok(x as u64)
                        } else {
                            Err(fpp_core::Error::InvalidParameter(format!(
                                "{x} is not a degree"
                            )))
                        }
                    })
                    .collect::<fpp_core::Result<Vec<u64>>>()?;
                DegreeDistribution::from_samples(ints)
            }
        }
    }
}

/// Reference law for `--against`.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// `geometric:P` on {1, 2, ...}
    Geometric(f64),
    /// `bfst:R`, the breadth-first limit law `a_k^(R)`
    Bfst(u64),
    /// `exp`, standard exponential cdf
    Exponential,
    /// `gumbel`, standard Gumbel cdf
    Gumbel,
    /// `file:PATH`, another sample or pmf file
    File(PathBuf),
}

impl std::str::FromStr for Reference {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || {
            CliError::Config(format!(
                "bad reference '{s}' (geometric:P, bfst:R, exp, gumbel, file:PATH)"
            ))
        };
        match s.split_once(':') {
            Some(("geometric", p)) => Ok(Reference::Geometric(p.parse().map_err(|_| bad())?)),
            Some(("bfst", r)) => Ok(Reference::Bfst(r.parse().map_err(|_| bad())?)),
            Some(("file", p)) => Ok(Reference::File(PathBuf::from(p))),
            None if s == "exp" => Ok(Reference::Exponential),
            None if s == "gumbel" => Ok(Reference::Gumbel),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOpts {
    pub input: PathBuf,
    pub series: Option<String>,
    pub tv: bool,
    pub ks: bool,
    pub tail: bool,
    pub k_min: Option<u64>,
    pub against: Option<Reference>,
}

pub fn analyze(opts: &AnalyzeOpts, seed: u64, out: Option<&Path>) -> CliResult<Stats> {
    let input = Input::read(&opts.input, opts.series.as_deref())?;
    let mut st = Stats::new("analyze", seed);
    match &input {
        Input::Values(v) => {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            st.push("count", n);
            st.push_se(
                "mean",
                mean,
                (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0) / n).sqrt(),
            );
        }
        Input::Pmf(p) => st.push("mean", p.mean()),
    }
    if opts.tv {
        let mine = input.pmf().map_err(CliError::input(&opts.input))?;
        let other: Vec<f64> = match opts.against.as_ref() {
            Some(Reference::Geometric(p)) => geometric_pmf(*p, mine.max_degree().max(64)),
            Some(Reference::Bfst(r)) => bfst_limit_pmf(*r)?,
            Some(Reference::File(path)) => Input::read(path, opts.series.as_deref())?
                .pmf()
                .map_err(CliError::input(path))?
                .pmf_slice()
                .to_vec(),
            _ => {
                return Err(CliError::Config(
                    "--tv needs --against geometric:P, bfst:R or file:PATH".into(),
                ))
            }
        };
        st.push("tv", tv_distance(mine.pmf_slice(), &other)?);
    }
    if opts.ks {
        let Input::Values(v) = &input else {
            return Err(CliError::Config(
                "--ks needs a sample file with a 'value' column".into(),
            ));
        };
        let ks = match opts.against.as_ref() {
            Some(Reference::Exponential) => {
                ks_one_sample(v, |x| if x > 0.0 { -(-x).exp_m1() } else { 0.0 })?
            }
            Some(Reference::Gumbel) => ks_one_sample(v, |x| (-(-x).exp()).exp())?,
            Some(Reference::File(path)) => match Input::read(path, None)? {
                Input::Values(w) => ks_two_sample(v, &w)?,
                Input::Pmf(_) => {
                    return Err(CliError::Config(
                        "--ks against a pmf table is not supported".into(),
                    ))
                }
            },
            _ => {
                return Err(CliError::Config(
                    "--ks needs --against exp, gumbel or file:PATH".into(),
                ))
            }
        };
        st.push("ks", ks);
    }
    if opts.tail {
        let dist = input.pmf().map_err(CliError::input(&opts.input))?;
        let rep = estimate_tail_exponent(&dist, opts.k_min)?;
        st.push("k_min", rep.regression.k_min as f64);
        st.push_se(
            "tau_regression",
            rep.regression.tau_hat,
            rep.regression.stderr,
        );
        if let Some(h) = rep.hill {
            st.push_se("tau_hill", h.tau_hat, h.stderr);
        }
        st.push("curvature", rep.curvature);
    }
    let mut settings = vec![format!("input={}", opts.input.display())];
    if let Some(s) = &opts.series {
        settings.push(format!("series={s}"));
    }
    if let Some(a) = &opts.against {
        settings.push(format!("against={a:?}"));
    }
    st.write(out, &Provenance::new("analyze", seed, settings))?;
    Ok(st)
}
