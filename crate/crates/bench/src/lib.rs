//! Fixtures shared by the benchmarks.

use fpp_core::graph::{build_configuration_model, draw_degree_sequence};
use fpp_core::{DegreeLaw, RngStream, WeightLaw, WeightedMultiGraph};

/// Configuration model on `n` vertices with exponential weights.
pub fn cm_graph(law: &DegreeLaw, n: usize, seed: u64) -> WeightedMultiGraph {
    let s = RngStream::new(seed, 0);
    let seq = draw_degree_sequence(law, n, s.labeled("degrees")).expect("valid law");
    let mut g = build_configuration_model(&seq, s.labeled("pairing")).expect("pairing");
    g.attach_weights(&WeightLaw::Exponential, s.labeled("weights"));
    g
}
