//! Line-oriented experiment configs.
//!
//! ```text
//! # comment
//! experiment = oracle-vs-sim
//! seed = 42
//!
//! [model]
//! n = 50000
//! degree = fixed:4
//!
//! [run]
//! replications = 20
//! ```
//!
//! Keys are stored as `section.key` (top-level keys have no section).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1Powerlaw,
    Fig2Regular,
    CompleteSGrid,
    OracleVsSim,
    RateOfConv,
    BfstIdentity,
    Recentering,
    Infvar,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig1Powerlaw,
        Experiment::Fig2Regular,
        Experiment::CompleteSGrid,
        Experiment::OracleVsSim,
        Experiment::RateOfConv,
        Experiment::BfstIdentity,
        Experiment::Recentering,
        Experiment::Infvar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1Powerlaw => "fig1-powerlaw",
            Experiment::Fig2Regular => "fig2-regular",
            Experiment::CompleteSGrid => "complete-s-grid",
            Experiment::OracleVsSim => "oracle-vs-sim",
            Experiment::RateOfConv => "rate-of-conv",
            Experiment::BfstIdentity => "bfst-identity",
            Experiment::Recentering => "recentering",
            Experiment::Infvar => "infvar",
        }
    }

    /// Defaults for every key the experiment reads.
    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Experiment::Fig1Powerlaw => &[
                ("model.n", "100000"),
                ("model.tau", "3.5"),
                ("model.d_min", "5"),
                ("model.weight", "exp"),
                ("run.replications", "10"),
            ],
            Experiment::Fig2Regular => &[
                ("model.n", "100000"),
                ("model.r", "100"),
                ("model.weight", "exp"),
                ("run.replications", "20"),
                ("analysis.k_max", "12"),
            ],
            Experiment::CompleteSGrid => &[
                ("model.n", "10000"),
                ("model.s", "0.5,1,2"),
                ("run.replications", "20"),
                ("run.edge_budget", "100000000"),
                ("oracle.pool_size", "100000"),
                ("oracle.draws", "1000000"),
            ],
            Experiment::OracleVsSim => &[
                ("model.n", "50000"),
                ("model.degree", "fixed:4"),
                ("model.weight", "exp"),
                ("run.replications", "20"),
                ("oracle.pool_size", "100000"),
                ("oracle.draws", "1000000"),
            ],
            Experiment::RateOfConv => &[
                ("model.degree", "fixed:4"),
                ("model.weight", "exp"),
                ("run.replications", "10000"),
                ("oracle.pool_size", "100000"),
                (
                    "analysis.k_grid",
                    "64,128,256,512,1024,2048,4096,8192,16384",
                ),
            ],
            Experiment::BfstIdentity => &[
                ("model.n", "100000"),
                ("model.r", "3"),
                ("run.replications", "5"),
                ("oracle.pool_size", "100000"),
                ("oracle.draws", "1000000"),
                ("analysis.z", "0.25,0.5,0.75"),
            ],
            Experiment::Recentering => &[
                ("model.s", "1"),
                ("model.n_grid", "250,500,1000"),
                ("run.replications", "20"),
                ("run.sources_per_graph", "50"),
                ("run.targets_per_source", "all"),
                ("run.edge_budget", "100000000"),
                ("oracle.pool_size", "100000"),
                ("oracle.draws", "100000"),
            ],
            Experiment::Infvar => &[
                ("model.tau", "2.5"),
                ("model.d_min", "2"),
                ("oracle.pool_size", "100000"),
                ("oracle.draws", "1000000"),
                ("analysis.k", "10000"),
                ("analysis.k_reps", "1000"),
            ],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                CliError::Config(format!(
                    "unknown experiment '{s}' (one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Raw `section.key = value` pairs with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config_at(line_no, "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(CliError::config_at(
                        line_no,
                        format!("bad section name '{name}'"),
                    ));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config_at(line_no, "expected key = value"))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::config_at(line_no, "empty key"));
            }
            let full = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if let Some((_, first)) = entries.get(&full) {
                return Err(CliError::config_at(
                    line_no,
                    format!("duplicate key '{full}' (first set on line {first})"),
                ));
            }
            entries.insert(full, (value.trim().to_string(), line_no));
        }
        Ok(RawConfig { entries })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Flag overrides always win.
    pub fn set(&mut self, key: &str, value: &str) {
        self.entries
            .insert(key.trim().to_string(), (value.trim().to_string(), 0));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }
}

/// Fully resolved config: defaults filled, every key known to the experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub output_dir: PathBuf,
    values: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self, CliError> {
        let experiment: Experiment = raw
            .get("experiment")
            .ok_or_else(|| CliError::Config("no experiment given".into()))?
            .parse()?;
        let seed = match raw.get("seed") {
            Some(s) => s.parse().map_err(|_| {
                CliError::Config(format!("seed must be an unsigned integer, got '{s}'"))
            })?,
            None => 0,
        };
        let output_dir = PathBuf::from(raw.get("run.output_dir").unwrap_or("."));
        let mut values: BTreeMap<String, String> = experiment
            .defaults()
            .iter()
            .map(|&(k, v)| (k.to_string(), v.to_string()))
            .collect();
        for (key, (value, line)) in &raw.entries {
            if matches!(key.as_str(), "experiment" | "seed" | "run.output_dir") {
                continue;
            }
            match values.get_mut(key) {
                Some(slot) => *slot = value.clone(),
                None => {
                    let at = if *line > 0 {
                        format!("line {line}: ")
                    } else {
                        String::new()
                    };
                    return Err(CliError::Config(format!(
                        "{at}key '{key}' is not used by {experiment}"
                    )));
                }
            }
        }
        Ok(ExperimentConfig {
            experiment,
            seed,
            output_dir,
            values,
        })
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("{key} missing from the defaults of {}", self.experiment))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let v = self.raw(key);
        v.parse()
            .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        self.raw(key)
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
            })
            .collect()
    }

    /// `None` for the literal `all`.
    pub fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            "all" => Ok(None),
            _ => self.get(key).map(Some),
        }
    }

    /// Canonical `key=value` lines, sorted; the hashed form.
    pub fn canonical(&self) -> Vec<String> {
        let mut lines = vec![
            format!("experiment={}", self.experiment),
            format!("seed={}", self.seed),
        ];
        lines.extend(self.values.iter().map(|(k, v)| format!("{k}={v}")));
        lines
    }

    pub fn hash(&self) -> String {
        crate::output::Provenance::from_config(self).hash()
    }
}
