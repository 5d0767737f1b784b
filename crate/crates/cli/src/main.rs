use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use fpp_cli::commands::{
    self, AnalyzeOpts, GenerateOpts, GraphKind, PoolOpts, Reference, SampleKind, SampleOpts,
    SourceSpec, TreeOpts,
};
use fpp_cli::config::{ExperimentConfig, RawConfig};
use fpp_cli::{experiments, CliError, CliResult};
use fpp_core::graph::DEFAULT_DENSE_EDGE_BUDGET;
use fpp_core::oracles::DEFAULT_TRUNCATION;
use fpp_core::{DegreeLaw, PoolConfig, PoolTarget, WeightLaw};

/// Shortest-path-tree degrees in first passage percolation.
#[derive(Parser, Debug)]
#[command(name = "fpp", version)]
struct Cli {
    /// Root seed; every random stage derives its stream from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (output directory for `run`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Draw a weighted graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Shortest-path trees from one or more sources; writes degree tables.
    Spt(TreeArgs),
    /// Breadth-first trees with random tie-breaking; writes degree tables.
    Bfst(TreeArgs),
    /// Solve a fixed-point law by population dynamics and write the pool.
    Pool(PoolArgs),
    /// Draw from a limit-law sampler.
    Sample(SampleArgs),
    /// Statistics of a sample or degree table.
    Analyze(AnalyzeArgs),
    /// Run a named experiment from a config file.
    Run(RunArgs),
}

#[derive(Args, Debug, Clone)]
struct DegreeArgs {
    /// Degree law: fixed:R, powerlaw:TAU:DMIN[:KMAX], explicit:k=p,... or pmf:PATH.
    #[arg(long)]
    degree: Option<String>,
    /// Shorthand for a power law with exponent TAU.
    #[arg(long, value_name = "TAU")]
    powerlaw: Option<f64>,
    /// Minimum degree of --powerlaw.
    #[arg(long, default_value_t = 2)]
    dmin: u64,
    /// Shorthand for fixed:R.
    #[arg(long, value_name = "R")]
    fixed: Option<u64>,
}

impl DegreeArgs {
    fn law(&self) -> CliResult<Option<DegreeLaw>> {
        let given = [
            self.degree.is_some(),
            self.powerlaw.is_some(),
            self.fixed.is_some(),
        ];
        if given.iter().filter(|&&b| b).count() > 1 {
            return Err(CliError::Config(
                "give only one of --degree, --powerlaw, --fixed".into(),
            ));
        }
        Ok(match (&self.degree, self.powerlaw, self.fixed) {
            (Some(d), _, _) => Some(d.parse()?),
            (_, Some(tau), _) => Some(DegreeLaw::power_law(tau, self.dmin)?),
            (_, _, Some(r)) => Some(DegreeLaw::fixed(r)?),
            _ => None,
        })
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("model").required(true).args(["cm", "complete"])))]
struct GenerateArgs {
    /// Configuration model.
    #[arg(long)]
    cm: bool,
    /// Complete graph with weights E^s.
    #[arg(long)]
    complete: bool,
    #[arg(short = 'n', long)]
    n: usize,
    #[command(flatten)]
    degree: DegreeArgs,
    /// Edge weight law: exp, uniform, const or exp-pow:S.
    #[arg(long, default_value = "exp")]
    weight: String,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = DEFAULT_DENSE_EDGE_BUDGET)]
    edge_budget: u64,
}

#[derive(Args, Debug)]
struct TreeArgs {
    /// Edge list written by `generate`.
    #[arg(long)]
    graph: PathBuf,
    /// `random` or a vertex index.
    #[arg(long, default_value = "random")]
    source: String,
    /// Number of random sources.
    #[arg(long, default_value_t = 1)]
    sources: usize,
    /// Also write the per-vertex table of the first tree here.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PoolArgs {
    /// w-complete, w-cm or v.
    #[arg(long, default_value = "w-complete")]
    target: String,
    #[arg(long)]
    s: Option<f64>,
    #[command(flatten)]
    degree: DegreeArgs,
    #[arg(long, default_value = "exp")]
    weight: String,
    #[arg(long, default_value_t = 100_000)]
    size: usize,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: f64,
    #[arg(long, default_value_t = PoolConfig::default().max_sweeps)]
    max_sweeps: usize,
    /// For target v: independent series draws instead of the min-recursion.
    #[arg(long)]
    series: bool,
}

impl PoolArgs {
    fn opts(&self) -> CliResult<PoolOpts> {
        let mut config = PoolConfig::with_size(self.size);
        config.max_sweeps = self.max_sweeps;
        Ok(PoolOpts {
            target: self.target.parse::<PoolTarget>()?,
            s: self.s,
            degree: self.degree.law()?,
            weight: self.weight.parse()?,
            truncation: self.truncation,
            config,
            series: self.series,
        })
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("sampler").required(true)
    .args(["hatd_complete", "hatd_cm", "hatd_infvar", "hatd_unit", "m_complete", "pool_value"])))]
struct SampleArgs {
    /// D̂ on the complete graph (needs --s).
    #[arg(long)]
    hatd_complete: bool,
    /// D̂ on the configuration model, finite-variance degrees.
    #[arg(long)]
    hatd_cm: bool,
    /// D̂ on the configuration model, infinite-variance degrees.
    #[arg(long)]
    hatd_infvar: bool,
    /// D̂ under unit edge weights.
    #[arg(long)]
    hatd_unit: bool,
    /// M on the complete graph (needs --s).
    #[arg(long)]
    m_complete: bool,
    /// Values resampled from the pool (W or V).
    #[arg(long)]
    pool_value: bool,
    /// Number of draws.
    #[arg(short = 'n', long, default_value_t = 1_000_000)]
    count: usize,
    /// Condition on degree k (D̂_k).
    #[arg(long)]
    k: Option<u64>,
    /// Reuse a pool written by `pool`.
    #[arg(long)]
    pool: Option<PathBuf>,
    #[command(flatten)]
    pool_args: PoolArgs,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Sample CSV (`value` column) or degree table (`k,p` columns).
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Row filter on the `series` column of a degree table.
    #[arg(long)]
    series: Option<String>,
    /// Total variation distance to --against.
    #[arg(long)]
    tv: bool,
    /// Kolmogorov-Smirnov distance to --against.
    #[arg(long)]
    ks: bool,
    /// Tail exponent estimates.
    #[arg(long)]
    tail: bool,
    #[arg(long)]
    k_min: Option<u64>,
    /// geometric:P, bfst:R, exp, gumbel or file:PATH.
    #[arg(long)]
    against: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// key=value config with [sections].
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment name; overrides the config.
    #[arg(long)]
    experiment: Option<String>,
    /// Override a config key, e.g. --set model.n=20000 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fpp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Generate(a) => {
            let opts = GenerateOpts {
                kind: if a.cm {
                    GraphKind::ConfigurationModel
                } else {
                    GraphKind::Complete
                },
                n: a.n,
                degree: a.degree.law()?,
                weight: a.weight.parse::<WeightLaw>()?,
                s: a.s,
                edge_budget: a.edge_budget,
            };
            commands::generate(&opts, seed, out)
        }
        Cmd::Spt(a) => commands::trees(&tree_opts(a, false)?, seed, out),
        Cmd::Bfst(a) => commands::trees(&tree_opts(a, true)?, seed, out),
        Cmd::Pool(a) => commands::pool(&a.opts()?, seed, out),
        Cmd::Sample(a) => {
            let kind = match () {
                _ if a.hatd_complete => SampleKind::HatDComplete,
                _ if a.hatd_cm => SampleKind::HatDCm,
                _ if a.hatd_infvar => SampleKind::HatDInfvar,
                _ if a.hatd_unit => SampleKind::HatDUnit,
                _ if a.m_complete => SampleKind::MComplete,
                _ => SampleKind::PoolValue,
            };
            let opts = SampleOpts {
                kind,
                count: a.count,
                k: a.k,
                pool_file: a.pool,
                pool: a.pool_args.opts()?,
            };
            commands::sample(&opts, seed, out)
        }
        Cmd::Analyze(a) => {
            let opts = AnalyzeOpts {
                input: a.input,
                series: a.series,
                tv: a.tv,
                ks: a.ks,
                tail: a.tail,
                k_min: a.k_min,
                against: a
                    .against
                    .as_deref()
                    .map(str::parse::<Reference>)
                    .transpose()?,
            };
            commands::analyze(&opts, seed, out).map(|_| ())
        }
        Cmd::Run(a) => {
            let mut raw = match &a.config {
                Some(path) => RawConfig::read(path)?,
                None => RawConfig::default(),
            };
            if let Some(e) = &a.experiment {
                raw.set("experiment", e);
            }
            for kv in &a.set {
                let (k, v) = kv.split_once('=').ok_or_else(|| {
                    CliError::Config(format!("--set expects KEY=VALUE, got '{kv}'"))
                })?;
                raw.set(k, v);
            }
            if let Some(s) = cli.seed {
                raw.set("seed", &s.to_string());
            }
            if let Some(dir) = out {
                raw.set("run.output_dir", &dir.to_string_lossy());
            }
            let cfg = ExperimentConfig::resolve(&raw)?;
            let stats = experiments::run(&cfg)?;
            stats.write(None, &fpp_cli::output::Provenance::from_config(&cfg))?;
            Ok(())
        }
    }
}

fn tree_opts(a: TreeArgs, breadth_first: bool) -> CliResult<TreeOpts> {
    let source = match a.source.as_str() {
        "random" => SourceSpec::Random(a.sources),
        v => SourceSpec::Fixed(v.parse().map_err(|_| {
            CliError::Config(format!("--source must be 'random' or a vertex, got '{v}'"))
        })?),
    };
    Ok(TreeOpts {
        graph: a.graph,
        source,
        breadth_first,
        table: a.table,
    })
}
