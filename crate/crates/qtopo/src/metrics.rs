//! Coarse and fine topology metrics: degree statistics, regularity, and
//! greedy modularity maximization.
//!
//! Regularity is the coefficient-of-variation complement `1 - sigma/mu` of
//! the degree distribution, clamped below at zero, so it is scale-free and
//! equals 1 exactly on regular graphs. Modularity uses Newman's
//! `Q = sum_c (e_c/E - (d_c/2E)^2)` maximized by deterministic greedy
//! agglomeration: always merge the community pair with the largest gain,
//! breaking ties toward the smallest id pair, and stop when no merge
//! strictly improves Q.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("degree statistics are undefined for an empty graph")]
    EmptyGraph,
    #[error("regularity is undefined when every node is isolated")]
    AllIsolated,
    #[error("modularity is undefined for a graph with no edges")]
    NoEdges,
}

/// Summary of a graph's degree distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub min_degree: usize,
    pub max_degree: usize,
    pub mean_degree: f64,
    /// Population standard deviation of the degrees.
    pub degree_stddev: f64,
}

pub fn degree_stats(graph: &Graph) -> Result<DegreeStats, MetricsError> {
    let n = graph.node_count();
    if n == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    let min_degree = graph.degrees().min().unwrap();
    let max_degree = graph.degrees().max().unwrap();
    let mean_degree = 2.0 * graph.edge_count() as f64 / n as f64;
    let variance = graph
        .degrees()
        .map(|d| {
            let diff = d as f64 - mean_degree;
            diff * diff
        })
        .sum::<f64>()
        / n as f64;
    Ok(DegreeStats {
        min_degree,
        max_degree,
        mean_degree,
        degree_stddev: variance.sqrt(),
    })
}

/// Degree-uniformity score in `[0, 1]`; exactly 1 on regular graphs.
pub fn regularity(graph: &Graph) -> Result<f64, MetricsError> {
    let stats = degree_stats(graph)?;
    if stats.mean_degree == 0.0 {
        return Err(MetricsError::AllIsolated);
    }
    Ok((1.0 - stats.degree_stddev / stats.mean_degree).max(0.0))
}

/// Result of greedy modularity maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularityResult {
    /// Community id per node; ids are dense and ordered by smallest member.
    pub assignment: Vec<usize>,
    pub community_count: usize,
    /// Newman modularity of the returned partition.
    pub q: f64,
}

#[derive(Debug, Clone, Copy)]
struct MergeCandidate {
    gain: f64,
    a: usize,
    b: usize,
}

impl PartialEq for MergeCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for MergeCandidate {}

impl Ord for MergeCandidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: larger gain first, then smaller (a, b) pair on gain ties.
        self.gain
            .partial_cmp(&other.gain)
            .expect("modularity gain is never NaN")
            .then_with(|| other.a.cmp(&self.a))
            .then_with(|| other.b.cmp(&self.b))
    }
}
impl PartialOrd for MergeCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn merge_gain(inter_edges: u64, deg_a: u64, deg_b: u64, edge_count: f64) -> f64 {
    inter_edges as f64 / edge_count - (deg_a as f64 * deg_b as f64) / (2.0 * edge_count * edge_count)
}

/// Greedy agglomerative modularity maximization.
pub fn modularity_partition(graph: &Graph) -> Result<ModularityResult, MetricsError> {
    let n = graph.node_count();
    let edge_count = graph.edge_count() as f64;
    if graph.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }

    let mut alive = vec![true; n];
    let mut degree_sum: Vec<u64> = graph.degrees().map(|d| d as u64).collect();
    let mut internal_edges = vec![0u64; n];
    let mut inter: Vec<HashMap<usize, u64>> = vec![HashMap::new(); n];
    // Union-find with the smaller community id surviving each merge, so a
    // community's root is always its smallest member.
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }

    let mut heap = BinaryHeap::new();
    for (u, v) in graph.edges() {
        let (a, b) = (u as usize, v as usize);
        inter[a].insert(b, 1);
        inter[b].insert(a, 1);
        heap.push(MergeCandidate {
            gain: merge_gain(1, degree_sum[a], degree_sum[b], edge_count),
            a,
            b,
        });
    }

    // Q of the all-singletons partition.
    let mut q: f64 = (0..n)
        .map(|v| {
            let frac = degree_sum[v] as f64 / (2.0 * edge_count);
            -frac * frac
        })
        .sum();

    while let Some(candidate) = heap.pop() {
        let MergeCandidate { gain, a, b } = candidate;
        if gain <= 0.0 {
            break;
        }
        if !alive[a] || !alive[b] {
            continue;
        }
        let Some(&edges_ab) = inter[a].get(&b) else {
            continue;
        };
        // Stale entries (pushed before a degree or edge-count update) are
        // skipped; a fresh entry for this pair is guaranteed to be queued.
        if merge_gain(edges_ab, degree_sum[a], degree_sum[b], edge_count) != gain {
            continue;
        }

        q += gain;
        alive[b] = false;
        parent[b] = a;
        internal_edges[a] += internal_edges[b] + edges_ab;
        degree_sum[a] += degree_sum[b];
        inter[a].remove(&b);
        let b_neighbors = std::mem::take(&mut inter[b]);
        for (x, w) in b_neighbors {
            if x == a {
                continue;
            }
            *inter[a].entry(x).or_insert(0) += w;
            inter[x].remove(&b);
            *inter[x].entry(a).or_insert(0) += w;
        }
        for (&x, &w) in &inter[a] {
            let (lo, hi) = if a < x { (a, x) } else { (x, a) };
            heap.push(MergeCandidate {
                gain: merge_gain(w, degree_sum[lo], degree_sum[hi], edge_count),
                a: lo,
                b: hi,
            });
        }
    }

    // Dense community ids ordered by smallest member; each root is its own
    // smallest member because merges keep the lower id.
    let mut root_to_id: HashMap<usize, usize> = HashMap::new();
    let mut assignment = vec![0usize; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        let next_id = root_to_id.len();
        assignment[v] = *root_to_id.entry(root).or_insert(next_id);
    }

    Ok(ModularityResult {
        community_count: root_to_id.len(),
        assignment,
        q,
    })
}

/// Newman modularity of an explicit partition, computed from scratch.
///
/// `assignment` must give a community id for every node.
pub fn partition_modularity(graph: &Graph, assignment: &[usize]) -> Result<f64, MetricsError> {
    assert_eq!(assignment.len(), graph.node_count(), "assignment length mismatch");
    let edge_count = graph.edge_count() as f64;
    if graph.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let communities = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut internal = vec![0u64; communities];
    let mut degree = vec![0u64; communities];
    for v in 0..graph.node_count() {
        degree[assignment[v]] += graph.degree(v as u32) as u64;
    }
    for (u, v) in graph.edges() {
        if assignment[u as usize] == assignment[v as usize] {
            internal[assignment[u as usize]] += 1;
        }
    }
    Ok((0..communities)
        .map(|c| {
            let frac = degree[c] as f64 / (2.0 * edge_count);
            internal[c] as f64 / edge_count - frac * frac
        })
        .sum())
}

/// Combined coarse and fine metrics describing one topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub regularity: Option<f64>,
    pub modularity: Option<f64>,
    pub community_count: Option<usize>,
}

pub fn topology_metrics(graph: &Graph) -> TopologyMetrics {
    let n = graph.node_count();
    let average_degree = if n == 0 {
        0.0
    } else {
        2.0 * graph.edge_count() as f64 / n as f64
    };
    let partition = modularity_partition(graph).ok();
    TopologyMetrics {
        node_count: n,
        edge_count: graph.edge_count(),
        average_degree,
        regularity: regularity(graph).ok(),
        modularity: partition.as_ref().map(|p| p.q),
        community_count: partition.as_ref().map(|p| p.community_count),
    }
}
