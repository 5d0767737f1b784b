//! Random weighted graphs: the configuration model on a degree sequence and
//! the complete graph with i.i.d. `E^s` weights.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::{DegreeLaw, WeightLaw};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub type VertexId = u32;
pub type EdgeId = usize;

/// Default budget on materialised complete-graph edges, `n(n-1)/2`.
pub const DEFAULT_DENSE_EDGE_BUDGET: u64 = 100_000_000;

/// Read access needed by the shortest-path routines.
pub trait WeightedGraph: Sync {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    /// `(u, v, weight)` of an edge.
    fn edge(&self, e: EdgeId) -> (VertexId, VertexId, f64);
    /// Graph degree; a self-loop counts twice.
    fn degree(&self, v: VertexId) -> usize;
    /// Calls `f(edge, other_endpoint, weight)` for every incidence of `v`.
    fn for_each_incidence<F: FnMut(EdgeId, VertexId, f64)>(&self, v: VertexId, f: F);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
}

/// Multigraph with per-edge weights; self-loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultiGraph {
    n: usize,
    edges: Vec<Edge>,
    // CSR incidence: edge ids around each vertex (a self-loop appears twice)
    offsets: Vec<usize>,
    incidence: Vec<u32>,
    has_self_loops: bool,
    has_multi_edges: bool,
}

impl WeightedMultiGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n > u32::MAX as usize || edges.len() > u32::MAX as usize {
            return Err(Error::ResourceCap(format!(
                "graph too large: n={n}, m={}",
                edges.len()
            )));
        }
        let mut deg = vec![0usize; n + 1];
        for (i, e) in edges.iter().enumerate() {
            if e.u as usize >= n || e.v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge {i} ({}, {}) out of range for n={n}",
                    e.u, e.v
                )));
            }
            if !(e.weight > 0.0) || !e.weight.is_finite() {
                return Err(Error::invalid(format!(
                    "edge {i} has non-positive weight {}",
                    e.weight
                )));
            }
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets[..n].to_vec();
        let mut incidence = vec![0u32; offsets[n]];
        for (i, e) in edges.iter().enumerate() {
            incidence[fill[e.u as usize]] = i as u32;
            fill[e.u as usize] += 1;
            incidence[fill[e.v as usize]] = i as u32;
            fill[e.v as usize] += 1;
        }
        let has_self_loops = edges.iter().any(|e| e.u == e.v);
        let mut pairs: Vec<(u32, u32)> =
            edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort_unstable();
        let has_multi_edges = pairs.windows(2).any(|w| w[0] == w[1]);
        Ok(WeightedMultiGraph {
            n,
            edges,
            offsets,
            incidence,
            has_self_loops,
            has_multi_edges,
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident_edges(&self, v: VertexId) -> &[u32] {
        &self.incidence[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn has_self_loops(&self) -> bool {
        self.has_self_loops
    }

    pub fn has_multi_edges(&self) -> bool {
        self.has_multi_edges
    }

    pub fn total_degree(&self) -> usize {
        self.incidence.len()
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| (self.offsets[v + 1] - self.offsets[v]) as u64)
            .collect()
    }

    /// Replaces every weight (self-loops and each parallel copy included)
    /// with an independent draw from `law`.
    pub fn attach_weights(&mut self, law: &WeightLaw, stream: RngStream) {
        let mut rng = stream.rng();
        for e in &mut self.edges {
            e.weight = law.sample(&mut rng);
        }
    }

    /// Edge list: `u v weight`, 0-based vertices, 17 significant digits.
    /// A leading `# vertices N` comment records isolated vertices.
    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        self.write_edge_list_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn write_edge_list_to<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# vertices {}", self.n)?;
        let mut line = String::with_capacity(64);
        for e in &self.edges {
            line.clear();
            writeln!(line, "{} {} {:.16e}", e.u, e.v, e.weight).expect("write to String");
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        Self::read_edge_list_from(BufReader::new(std::fs::File::open(path)?))
    }

    pub fn read_edge_list_from<R: BufRead>(input: R) -> Result<Self> {
        let mut declared_n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_vertex: Option<u32> = None;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(n) = comment.trim().strip_prefix("vertices") {
                    declared_n = Some(n.trim().parse().map_err(|_| {
                        Error::parse(lineno, format!("bad vertex count '{}'", n.trim()))
                    })?);
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 'u v weight', got '{trimmed}'"),
                ));
            }
            let u: u32 = fields[0]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", fields[0])))?;
            let v: u32 = fields[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad vertex '{}'", fields[1])))?;
            let weight: f64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad weight '{}'", fields[2])))?;
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::parse(
                    lineno,
                    format!("weight must be positive, got {weight}"),
                ));
            }
            max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push(Edge { u, v, weight });
        }
        let needed = max_vertex.map_or(0, |m| m as usize + 1);
        let n = match declared_n {
            Some(n) if n < needed => {
                return Err(Error::parse(
                    0,
                    format!("declared {n} vertices but edge uses vertex {}", needed - 1),
                ))
            }
            Some(n) => n,
            None => needed,
        };
        WeightedMultiGraph::new(n, edges)
    }
}

impl WeightedGraph for WeightedMultiGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge(&self, e: EdgeId) -> (VertexId, VertexId, f64) {
        let e = &self.edges[e];
        (e.u, e.v, e.weight)
    }

    fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    #[inline]
    fn for_each_incidence<F: FnMut(EdgeId, VertexId, f64)>(&self, v: VertexId, mut f: F) {
        for &eid in self.incident_edges(v) {
            let e = &self.edges[eid as usize];
            let other = if e.u == v { e.v } else { e.u };
            f(eid as usize, other, e.weight);
        }
    }
}

/// Degree sequence with an even total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
    total: u64,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u64>) -> Result<Self> {
        let total: u64 = degrees.iter().sum();
        if total % 2 == 1 {
            return Err(Error::invalid(format!("degree total {total} is odd")));
        }
        Ok(DegreeSequence { degrees, total })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// One degree per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.degrees.len() * 4);
        for d in &self.degrees {
            writeln!(s, "{d}").expect("write to String");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut degrees = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            degrees.push(
                t.parse()
                    .map_err(|_| Error::parse(i + 1, format!("bad degree '{t}'")))?,
            );
        }
        DegreeSequence::new(degrees)
    }
}

/// `n` i.i.d. degrees; an odd total is fixed by incrementing one uniformly
/// chosen entry.
pub fn draw_degree_sequence(
    law: &DegreeLaw,
    n: usize,
    stream: RngStream,
) -> Result<DegreeSequence> {
    if n < 2 {
        return Err(Error::invalid("degree sequence needs n >= 2"));
    }
    let sampler = law.sampler();
    let mut rng = stream.rng();
    let mut degrees: Vec<u64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
    let total: u64 = degrees.iter().sum();
    if total % 2 == 1 {
        let i = rng.random_range(0..n);
        degrees[i] += 1;
    }
    DegreeSequence::new(degrees)
}

/// Uniform matching of half-edges (shuffle, then pair consecutive entries).
/// Weights are set to 1 until [`WeightedMultiGraph::attach_weights`].
pub fn build_configuration_model(
    seq: &DegreeSequence,
    stream: RngStream,
) -> Result<WeightedMultiGraph> {
    let n = seq.len();
    if seq.total() > u32::MAX as u64 {
        return Err(Error::ResourceCap(format!(
            "{} half-edges exceed the u32 index range",
            seq.total()
        )));
    }
    let mut half_edges: Vec<u32> = Vec::with_capacity(seq.total() as usize);
    for (v, &d) in seq.degrees().iter().enumerate() {
        half_edges.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    let mut rng = stream.rng();
    half_edges.shuffle(&mut rng);
    let edges = half_edges
        .chunks_exact(2)
        .map(|pair| Edge {
            u: pair[0],
            v: pair[1],
            weight: 1.0,
        })
        .collect();
    WeightedMultiGraph::new(n, edges)
}

/// Complete graph `K_n` with materialised weights.
///
/// Weights are drawn once per unordered pair and stored in a symmetric
/// row-major `n × n` matrix so that a vertex's row is contiguous; edge ids
/// index the pairs `(v, u)`, `v < u`, in packed-triangle order.
#[derive(Debug, Clone)]
pub struct CompleteGraph {
    n: usize,
    s: f64,
    matrix: Vec<f64>,
}

impl CompleteGraph {
    /// `n(n-1)/2` weights `E^s`; rejected when above `edge_budget`.
    pub fn build(n: usize, s: f64, stream: RngStream, edge_budget: u64) -> Result<Self> {
        WeightLaw::powered(s)?;
        let m = (n as u64) * (n as u64).saturating_sub(1) / 2;
        if m > edge_budget {
            return Err(Error::ResourceCap(format!(
                "complete graph on {n} vertices needs {m} weights, above the budget of {edge_budget}; lower n or raise the budget"
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::ResourceCap(format!("n={n} exceeds u32 vertex ids")));
        }
        let mut g = CompleteGraph {
            n,
            s,
            matrix: vec![f64::INFINITY; n * n],
        };
        g.resample(stream);
        Ok(g)
    }

    /// Redraw every weight in place from `stream`; same result as a fresh
    /// [`build`](Self::build) with that stream.
    pub fn resample(&mut self, stream: RngStream) {
        let n = self.n;
        let law = WeightLaw::PoweredExponential { s: self.s };
        let mut rng = stream.rng();
        let matrix = &mut self.matrix;
        for u in 1..n {
            for w in &mut matrix[u * n..u * n + u] {
                *w = law.sample(&mut rng);
            }
        }
        // mirror the lower triangle tile by tile
        const TILE: usize = 64;
        for bi in (0..n).step_by(TILE) {
            for bj in (0..=bi).step_by(TILE) {
                for u in bi..(bi + TILE).min(n) {
                    for v in bj..(bj + TILE).min(u) {
                        matrix[v * n + u] = matrix[u * n + v];
                    }
                }
            }
        }
    }

    #[inline]
    fn row_start(u: usize) -> usize {
        u * (u.wrapping_sub(1)) / 2
    }

    #[inline]
    pub fn weight(&self, u: VertexId, v: VertexId) -> f64 {
        debug_assert_ne!(u, v);
        self.matrix[u as usize * self.n + v as usize]
    }

    /// Weights from `u` to every vertex (`+inf` on the diagonal).
    #[inline]
    pub fn row(&self, u: VertexId) -> &[f64] {
        &self.matrix[u as usize * self.n..(u as usize + 1) * self.n]
    }

    pub fn edge_id(u: VertexId, v: VertexId) -> EdgeId {
        let (hi, lo) = if u > v { (u, v) } else { (v, u) };
        Self::row_start(hi as usize) + lo as usize
    }

    /// Copy into the generic multigraph representation (small n only).
    pub fn to_multigraph(&self) -> Result<WeightedMultiGraph> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for u in 1..self.n as u32 {
            for v in 0..u {
                edges.push(Edge {
                    u: v,
                    v: u,
                    weight: self.weight(u, v),
                });
            }
        }
        WeightedMultiGraph::new(self.n, edges)
    }
}

impl WeightedGraph for CompleteGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    fn edge(&self, e: EdgeId) -> (VertexId, VertexId, f64) {
        // largest u with u(u-1)/2 <= e
        let mut u = ((1.0 + (1.0 + 8.0 * e as f64).sqrt()) / 2.0).floor() as usize;
        while Self::row_start(u) > e {
            u -= 1;
        }
        while Self::row_start(u + 1) <= e {
            u += 1;
        }
        let v = e - Self::row_start(u);
        (
            v as VertexId,
            u as VertexId,
            self.weight(u as VertexId, v as VertexId),
        )
    }

    fn degree(&self, _v: VertexId) -> usize {
        self.n - 1
    }

    fn for_each_incidence<F: FnMut(EdgeId, VertexId, f64)>(&self, v: VertexId, mut f: F) {
        for (w, &weight) in self.row(v).iter().enumerate() {
            let w = w as VertexId;
            if w != v {
                f(Self::edge_id(v, w), w, weight);
            }
        }
    }
}
