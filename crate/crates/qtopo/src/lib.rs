//! Quantum-annealer hardware topologies and clique minor embedding.
//!
//! The crate generates QPU hardware graphs (Zephyr and Havel-Hakimi
//! families), computes minor embeddings of problem graphs into them with a
//! randomized chain-routing heuristic, and benchmarks topology
//! expressiveness: the largest embeddable clique per host, chain-length
//! statistics, and qubit-count-normalized comparison metrics.

pub mod embed;
pub mod eval;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod report;
pub mod topology;

pub use graph::{Graph, GraphError, NodeId};
