use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What produced a file: written as `#` lines at the top of every CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub name: String,
    pub seed: u64,
    /// Canonical `key=value` lines of the resolved settings.
    pub settings: Vec<String>,
}

impl Provenance {
    pub fn new(name: impl Into<String>, seed: u64, settings: Vec<String>) -> Self {
        Provenance {
            name: name.into(),
            seed,
            settings,
        }
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Provenance::new(cfg.experiment.name(), cfg.seed, cfg.canonical())
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for line in &self.settings {
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn write_header<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# fpp {VERSION}")?;
        writeln!(out, "# run {}", self.name)?;
        writeln!(out, "# seed {}", self.seed)?;
        writeln!(out, "# config_hash {}", self.hash())?;
        for line in &self.settings {
            writeln!(out, "# config {line}")?;
        }
        Ok(())
    }
}

/// CSV file with the provenance header and one column header row.
pub struct CsvFile {
    out: Box<dyn Write>,
}

impl CsvFile {
    /// `None` or `-` writes to stdout.
    pub fn create(path: Option<&Path>, prov: &Provenance, columns: &[&str]) -> io::Result<Self> {
        let mut out: Box<dyn Write> = match path {
            Some(p) if p != Path::new("-") => Box::new(BufWriter::new(File::create(p)?)),
            _ => Box::new(BufWriter::new(io::stdout().lock())),
        };
        prov.write_header(&mut out)?;
        writeln!(out, "{}", columns.join(","))?;
        Ok(CsvFile { out })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn raw(&mut self, text: &str) -> io::Result<()> {
        self.out.write_all(text.as_bytes())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Rows `experiment,seed,statistic,value,stderr`.
pub struct Stats {
    experiment: String,
    seed: u64,
    rows: Vec<(String, f64, Option<f64>)>,
}

impl Stats {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Stats {
            experiment: experiment.to_string(),
            seed,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.rows.push((name.into(), value, None));
    }

    pub fn push_se(&mut self, name: impl Into<String>, value: f64, stderr: f64) {
        self.rows.push((name.into(), value, Some(stderr)));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.0 == name).map(|r| r.1)
    }

    pub fn write(&self, path: Option<&Path>, prov: &Provenance) -> io::Result<()> {
        let mut csv = CsvFile::create(
            path,
            prov,
            &["experiment", "seed", "statistic", "value", "stderr"],
        )?;
        for (name, value, se) in &self.rows {
            csv.row(&[
                self.experiment.clone(),
                self.seed.to_string(),
                name.clone(),
                fmt_f(*value),
                se.map(fmt_f).unwrap_or_default(),
            ])?;
        }
        csv.finish()
    }
}

pub fn fmt_f(x: f64) -> String {
    format!("{x:.10e}")
}
