use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolTarget {
    WConfigurationModel,
    WComplete,
    V,
}

impl fmt::Display for PoolTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolTarget::WConfigurationModel => "w-cm",
            PoolTarget::WComplete => "w-complete",
            PoolTarget::V => "v",
        })
    }
}

impl FromStr for PoolTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "w-cm" => Ok(PoolTarget::WConfigurationModel),
            "w-complete" => Ok(PoolTarget::WComplete),
            "v" => Ok(PoolTarget::V),
            other => Err(Error::invalid(format!(
                "unknown pool target '{other}' (w-cm, w-complete, v)"
            ))),
        }
    }
}

/// Free-form provenance carried in the pool file header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PoolMeta {
    pub s: Option<f64>,
    pub lambda: Option<f64>,
    pub degree_law: Option<String>,
    pub weight_law: Option<String>,
    pub seed: u64,
    pub converged: bool,
    /// KS distance between the last two sweeps.
    pub last_ks: f64,
}

/// Finite population approximating the law of W or V.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePool {
    samples: Vec<f64>,
    generation: usize,
    target: PoolTarget,
    pub meta: PoolMeta,
}

impl SamplePool {
    pub fn new(
        target: PoolTarget,
        samples: Vec<f64>,
        generation: usize,
        meta: PoolMeta,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("empty pool"));
        }
        let ok = match target {
            PoolTarget::V => samples.iter().all(|v| *v > 0.0 && v.is_finite()),
            _ => samples.iter().all(|w| *w >= 0.0 && w.is_finite()),
        };
        if !ok {
            let what = if target == PoolTarget::V {
                "positive"
            } else {
                "nonnegative"
            };
            return Err(Error::invalid(format!(
                "{target} pool samples must be finite and {what}"
            )));
        }
        Ok(SamplePool {
            samples,
            generation,
            target,
            meta,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn target(&self) -> PoolTarget {
        self.target
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Uniformly chosen member.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.samples[rng.random_range(0..self.samples.len())]
    }

    /// Empirical Laplace transform `mean(e^{-u X})`.
    pub fn laplace(&self, u: f64) -> f64 {
        self.samples.iter().map(|x| (-u * x).exp()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        let m = &self.meta;
        writeln!(out, "# fpp-pool")?;
        writeln!(out, "# target {}", self.target)?;
        writeln!(out, "# size {}", self.samples.len())?;
        writeln!(out, "# sweeps {}", self.generation)?;
        writeln!(out, "# seed {}", m.seed)?;
        if let Some(s) = m.s {
            writeln!(out, "# s {s}")?;
        }
        if let Some(l) = m.lambda {
            writeln!(out, "# lambda {l}")?;
        }
        if let Some(d) = &m.degree_law {
            writeln!(out, "# degree_law {d}")?;
        }
        if let Some(w) = &m.weight_law {
            writeln!(out, "# weight_law {w}")?;
        }
        writeln!(out, "# converged {}", m.converged)?;
        writeln!(out, "# last_ks {}", m.last_ks)?;
        for x in &self.samples {
            writeln!(out, "{x:.17e}")?;
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut target = None;
        let mut generation = 0;
        let mut size = None;
        let mut meta = PoolMeta::default();
        let mut samples = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(h) = t.strip_prefix('#') {
                let mut it = h.trim().splitn(2, ' ');
                let key = it.next().unwrap_or("");
                let val = it.next().unwrap_or("").trim();
                let num = |v: &str| {
                    v.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad value '{v}' for {key}")))
                };
                match key {
                    "target" => {
                        target = Some(
                            val.parse::<PoolTarget>()
                                .map_err(|e| Error::parse(lineno, e.to_string()))?,
                        )
                    }
                    "size" => size = Some(num(val)? as usize),
                    "sweeps" => generation = num(val)? as usize,
                    "seed" => {
                        meta.seed = val
                            .parse()
                            .map_err(|_| Error::parse(lineno, format!("bad seed '{val}'")))?
                    }
                    "s" => meta.s = Some(num(val)?),
                    "lambda" => meta.lambda = Some(num(val)?),
                    "degree_law" => meta.degree_law = Some(val.to_string()),
                    "weight_law" => meta.weight_law = Some(val.to_string()),
                    "converged" => meta.converged = val == "true",
                    "last_ks" => meta.last_ks = num(val)?,
                    _ => {}
                }
                continue;
            }
            samples.push(
                t.parse::<f64>()
                    .map_err(|_| Error::parse(lineno, format!("expected a real, got '{t}'")))?,
            );
        }
        let target = target.ok_or_else(|| Error::parse(0, "missing '# target' header"))?;
        if let Some(n) = size {
            if n != samples.len() {
                return Err(Error::parse(
                    0,
                    format!("header size {n} but {} samples", samples.len()),
                ));
            }
        }
        SamplePool::new(target, samples, generation, meta)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}
