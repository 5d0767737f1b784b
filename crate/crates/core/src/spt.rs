//! Shortest-path trees, breadth-first trees and the excised-vertex degree identity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use rayon::prelude::*;

use crate::analysis::DegreeDistribution;
use crate::error::{Error, Result};
use crate::graph::{CompleteGraph, EdgeId, VertexId, WeightedGraph};
use crate::rng::RngStream;

const NONE_V: VertexId = VertexId::MAX;
const NONE_E: EdgeId = EdgeId::MAX;
const NONE_H: u32 = u32::MAX;

/// Single-source tree: parent pointers, distances, hop counts and tree degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathTree {
    source: VertexId,
    parent: Vec<VertexId>,
    parent_edge: Vec<EdgeId>,
    dist: Vec<f64>,
    hops: Vec<u32>,
    tree_degree: Vec<u32>,
    order: Vec<VertexId>,
}

impl ShortestPathTree {
    fn empty(n: usize, source: VertexId) -> Self {
        ShortestPathTree {
            source,
            parent: vec![NONE_V; n],
            parent_edge: vec![NONE_E; n],
            dist: vec![f64::INFINITY; n],
            hops: vec![NONE_H; n],
            tree_degree: vec![0; n],
            order: Vec::with_capacity(n),
        }
    }

    fn finish(mut self) -> Self {
        for &v in &self.order[1..] {
            self.tree_degree[v as usize] += 1;
            self.tree_degree[self.parent[v as usize] as usize] += 1;
        }
        self
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn reached(&self) -> usize {
        self.order.len()
    }

    pub fn is_reached(&self, v: VertexId) -> bool {
        self.dist[v as usize].is_finite()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        Some(self.parent[v as usize]).filter(|&p| p != NONE_V)
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        Some(self.parent_edge[v as usize]).filter(|&e| e != NONE_E)
    }

    pub fn dist(&self, v: VertexId) -> Option<f64> {
        Some(self.dist[v as usize]).filter(|d| d.is_finite())
    }

    pub fn hops(&self, v: VertexId) -> Option<u32> {
        Some(self.hops[v as usize]).filter(|&h| h != NONE_H)
    }

    pub fn tree_degree(&self, v: VertexId) -> u32 {
        self.tree_degree[v as usize]
    }

    pub fn tree_degrees(&self) -> &[u32] {
        &self.tree_degree
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    /// Reached vertices in the order they were settled.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Text table `v parent dist hops tree_degree`; `-` marks missing fields.
    pub fn write_table<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# v parent dist hops tree_degree")?;
        for v in 0..self.vertex_count() as VertexId {
            let parent = self.parent(v).map_or("-".to_string(), |p| p.to_string());
            let dist = self
                .dist(v)
                .map_or("inf".to_string(), |d| format!("{d:.16e}"));
            let hops = self.hops(v).map_or("-".to_string(), |h| h.to_string());
            writeln!(out, "{v} {parent} {dist} {hops} {}", self.tree_degree(v))?;
        }
        Ok(())
    }

    pub fn to_table(&self) -> String {
        let mut buf = Vec::new();
        self.write_table(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii table")
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64, f64);

impl Key {
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.total_cmp(&other.1))
    }
}

struct Entry {
    key: Key,
    v: VertexId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // min-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.cmp_total(&self.key).then(other.v.cmp(&self.v))
    }
}

/// Heap Dijkstra on lexicographic keys `(primary, secondary)`; `step` maps an edge to its key increment.
fn lexicographic_dijkstra<G, S>(
    graph: &G,
    source: VertexId,
    excluded: Option<VertexId>,
    step: S,
) -> ShortestPathTree
where
    G: WeightedGraph + ?Sized,
    S: Fn(EdgeId, f64) -> (f64, f64),
{
    let n = graph.vertex_count();
    let mut t = ShortestPathTree::empty(n, source);
    let mut second = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    t.dist[source as usize] = 0.0;
    t.hops[source as usize] = 0;
    second[source as usize] = 0.0;
    heap.push(Entry {
        key: Key(0.0, 0.0),
        v: source,
    });
    while let Some(Entry { key, v }) = heap.pop() {
        let vi = v as usize;
        if settled[vi] {
            continue;
        }
        settled[vi] = true;
        t.order.push(v);
        let h = t.hops[vi] + 1;
        graph.for_each_incidence(v, |e, w, weight| {
            let wi = w as usize;
            if settled[wi] || Some(w) == excluded {
                return;
            }
            let (a, b) = step(e, weight);
            let cand = Key(key.0 + a, key.1 + b);
            if cand.cmp_total(&Key(t.dist[wi], second[wi])) == Ordering::Less {
                t.dist[wi] = cand.0;
                second[wi] = cand.1;
                t.parent[wi] = v;
                t.parent_edge[wi] = e;
                t.hops[wi] = h;
                heap.push(Entry { key: cand, v: w });
            }
        });
    }
    t.finish()
}

fn check_source<G: WeightedGraph + ?Sized>(graph: &G, source: VertexId) -> Result<()> {
    if (source as usize) < graph.vertex_count() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "source {source} outside [0, {})",
            graph.vertex_count()
        )))
    }
}

/// Minimum-weight tree from `source` (binary heap, lazy deletion).
pub fn shortest_path_tree<G: WeightedGraph + ?Sized>(
    graph: &G,
    source: VertexId,
) -> Result<ShortestPathTree> {
    check_source(graph, source)?;
    Ok(lexicographic_dijkstra(graph, source, None, |_, w| (w, 0.0)))
}

/// Index and value of the smallest entry (`usize::MAX` if none is finite).
/// Four interleaved lanes keep the comparisons independent.
fn argmin(xs: &[f64]) -> (usize, f64) {
    let mut best = [f64::INFINITY; 4];
    let mut at = [usize::MAX; 4];
    let chunks = xs.chunks_exact(4);
    let tail = chunks.remainder();
    for (c, chunk) in chunks.enumerate() {
        for l in 0..4 {
            if chunk[l] < best[l] {
                best[l] = chunk[l];
                at[l] = 4 * c + l;
            }
        }
    }
    for (j, &x) in tail.iter().enumerate() {
        if x < best[0] {
            best[0] = x;
            at[0] = xs.len() - tail.len() + j;
        }
    }
    let mut k = 0;
    for l in 1..4 {
        if best[l] < best[k] || (best[l] == best[k] && at[l] < at[k]) {
            k = l;
        }
    }
    (at[k], best[k])
}

/// O(n²) array Dijkstra over the dense weight matrix.
pub fn complete_graph_tree(graph: &CompleteGraph, source: VertexId) -> Result<ShortestPathTree> {
    check_source(graph, source)?;
    let n = graph.vertex_count();
    let mut t = ShortestPathTree::empty(n, source);
    // unsettled vertices with their tentative distance and parent,
    // kept compact so each round scans only what is left
    let mut rem_v: Vec<u32> = (0..n as u32).filter(|&v| v != source).collect();
    let mut rem_d = vec![f64::INFINITY; rem_v.len()];
    let mut rem_p = vec![NONE_V; rem_v.len()];
    t.dist[source as usize] = 0.0;
    t.hops[source as usize] = 0;
    t.order.push(source);
    let mut cur = source;
    let mut base = 0.0;
    while !rem_v.is_empty() {
        let row = graph.row(cur);
        for ((&v, d), p) in rem_v.iter().zip(rem_d.iter_mut()).zip(rem_p.iter_mut()) {
            let cand = base + row[v as usize];
            let better = cand < *d;
            *d = if better { cand } else { *d };
            *p = if better { cur } else { *p };
        }
        let (next, best) = argmin(&rem_d);
        if next == usize::MAX {
            break;
        }
        let v = rem_v[next] as usize;
        t.dist[v] = best;
        t.parent[v] = rem_p[next];
        t.hops[v] = t.hops[rem_p[next] as usize] + 1;
        t.order.push(v as VertexId);
        cur = v as VertexId;
        base = best;
        rem_v.remove(next);
        rem_d.remove(next);
        rem_p.remove(next);
    }
    for v in 0..n {
        if t.parent[v] != NONE_V {
            t.parent_edge[v] = CompleteGraph::edge_id(v as VertexId, t.parent[v]);
        }
    }
    Ok(t.finish())
}

/// Breadth-first tree: paths ranked by hop count, ties broken by the sum of
/// per-edge uniform keys drawn from `stream` (the `1 + εU_e` limit).
/// `dist` holds hop counts.
pub fn bfst<G: WeightedGraph + ?Sized>(
    graph: &G,
    source: VertexId,
    stream: RngStream,
) -> Result<ShortestPathTree> {
    check_source(graph, source)?;
    Ok(lexicographic_dijkstra(graph, source, None, |e, _| {
        (1.0, stream.hashed_uniform(e as u64))
    }))
}

/// Trees from many sources, computed in parallel, returned in source order.
pub fn shortest_path_trees<G: WeightedGraph + ?Sized>(
    graph: &G,
    sources: &[VertexId],
) -> Result<Vec<ShortestPathTree>> {
    sources
        .par_iter()
        .map(|&s| shortest_path_tree(graph, s))
        .collect()
}

pub fn tree_degree_of(spt: &ShortestPathTree, v: VertexId) -> u32 {
    spt.tree_degree(v)
}

/// Pmf of tree degrees over all n vertices; unreached vertices count as degree 0.
pub fn empirical_tree_degrees(spt: &ShortestPathTree) -> Result<DegreeDistribution> {
    pooled_tree_degrees(std::slice::from_ref(spt), false)
}

/// Pooled pmf over several trees; `reached_only` restricts to vertices each tree reached.
pub fn pooled_tree_degrees(
    trees: &[ShortestPathTree],
    reached_only: bool,
) -> Result<DegreeDistribution> {
    let mut counts: Vec<u64> = Vec::new();
    for t in trees {
        for (v, &d) in t.tree_degree.iter().enumerate() {
            if reached_only && !t.dist[v].is_finite() {
                continue;
            }
            if d as usize >= counts.len() {
                counts.resize(d as usize + 1, 0);
            }
            counts[d as usize] += 1;
        }
    }
    DegreeDistribution::from_counts(&counts)
}

/// `2 (reached − 1) / n`, the handshake value.
pub fn mean_tree_degree(spt: &ShortestPathTree) -> f64 {
    2.0 * (spt.reached() as f64 - 1.0) / spt.vertex_count() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcisionOutcome {
    Degree(u32),
    /// No neighbour of the target is reachable once it is removed.
    Unreachable,
}

/// Tree degree of `target` recomputed from distances in the graph with `target` removed.
///
/// With `C'(v)` the excised distances and `C = min_v C'(v) + Y_v` attained at `U`,
/// the first-order count is `1 + #{v ≠ U : C + Y_v < C'(v)}`. On a finite graph a
/// neighbour `v` can also be reached through `target` and a second neighbour `w`,
/// at `C + Y_w + d'(w, v)`; a second excised-graph pass seeded with `C + Y_w` at
/// every neighbour settles those cases, and `v` counts iff its own seed wins.
pub fn degree_via_excision<G: WeightedGraph + ?Sized>(
    graph: &G,
    source: VertexId,
    target: VertexId,
) -> Result<ExcisionOutcome> {
    check_source(graph, source)?;
    check_source(graph, target)?;
    if source == target {
        return Err(Error::invalid("target must differ from source"));
    }
    // lightest edge to each distinct neighbour
    let mut nbrs: Vec<(VertexId, f64)> = Vec::new();
    graph.for_each_incidence(target, |_, v, w| {
        if v != target {
            nbrs.push((v, w));
        }
    });
    nbrs.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    nbrs.dedup_by_key(|p| p.0);

    let excised = lexicographic_dijkstra(graph, source, Some(target), |_, w| (w, 0.0));
    let c_prime = |v: VertexId| excised.dist[v as usize];
    let c = nbrs
        .iter()
        .map(|&(v, y)| c_prime(v) + y)
        .fold(f64::INFINITY, f64::min);
    if !c.is_finite() {
        return Ok(ExcisionOutcome::Unreachable);
    }
    let mut seeds = vec![(source, 0.0, NONE_V)];
    seeds.extend(
        nbrs.iter()
            .filter(|&&(v, y)| c + y < c_prime(v))
            .map(|&(v, y)| (v, c + y, v)),
    );
    let origin = seeded_origins(graph, &seeds, target);
    let children = nbrs
        .iter()
        .filter(|&&(v, _)| origin[v as usize] == v)
        .count();
    Ok(ExcisionOutcome::Degree(1 + children as u32))
}

/// Multi-seed Dijkstra avoiding `excluded`; returns for every vertex the
/// label of the seed its shortest path starts from.
fn seeded_origins<G: WeightedGraph + ?Sized>(
    graph: &G,
    seeds: &[(VertexId, f64, VertexId)],
    excluded: VertexId,
) -> Vec<VertexId> {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut origin = vec![NONE_V; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(v, d, label) in seeds {
        if d < dist[v as usize] {
            dist[v as usize] = d;
            origin[v as usize] = label;
            heap.push(Entry {
                key: Key(d, 0.0),
                v,
            });
        }
    }
    while let Some(Entry { key, v }) = heap.pop() {
        let vi = v as usize;
        if settled[vi] {
            continue;
        }
        settled[vi] = true;
        graph.for_each_incidence(v, |_, w, weight| {
            let wi = w as usize;
            if settled[wi] || w == excluded {
                return;
            }
            let cand = key.0 + weight;
            if cand < dist[wi] {
                dist[wi] = cand;
                origin[wi] = origin[vi];
                heap.push(Entry {
                    key: Key(cand, 0.0),
                    v: w,
                });
            }
        });
    }
    origin
}
