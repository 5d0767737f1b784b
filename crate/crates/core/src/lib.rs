//! First passage percolation on random graphs: shortest-path-tree degrees and
//! their limit laws.
//!
//! The crate has two halves. [`graph`] and [`spt`] build configuration-model and
//! complete graphs with i.i.d. edge weights and extract single-source shortest-path
//! trees. [`oracles`] samples the limiting degree laws directly (population
//! dynamics for `W` and `V`, Poisson-process samplers for `D̂`), and [`analysis`]
//! compares the two.
//!
//! ```
//! use fpp_core::{shortest_path_tree, DegreeLaw, RngStream, WeightLaw};
//! use fpp_core::graph::{build_configuration_model, draw_degree_sequence};
//!
//! let root = RngStream::new(7, 0);
//! let seq = draw_degree_sequence(&DegreeLaw::fixed(3).unwrap(), 1000, root.labeled("deg")).unwrap();
//! let mut g = build_configuration_model(&seq, root.labeled("pair")).unwrap();
//! g.attach_weights(&WeightLaw::Exponential, root.labeled("w"));
//! let tree = shortest_path_tree(&g, 0).unwrap();
//! let total: u32 = tree.tree_degrees().iter().sum();
//! assert_eq!(total as usize, 2 * (tree.reached() - 1));
//! ```

pub mod analysis;
pub mod dist;
pub mod error;
pub mod graph;
pub mod oracles;
pub mod rng;
pub mod special;
pub mod spt;

pub use analysis::DegreeDistribution;
pub use dist::{DegreeLaw, WeightLaw};
pub use error::{Error, Result};
pub use graph::{CompleteGraph, DegreeSequence, VertexId, WeightedGraph, WeightedMultiGraph};
pub use oracles::{PoolConfig, PoolTarget, SamplePool};
pub use rng::RngStream;
pub use spt::{bfst, complete_graph_tree, shortest_path_tree, ShortestPathTree};
