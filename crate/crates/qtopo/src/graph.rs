//! Undirected simple graphs over dense integer node ids.
//!
//! The adjacency list of every node is kept strictly ascending, which gives
//! `O(log d)` membership tests and makes serialized output canonical: two
//! graphs with the same edge set are byte-identical when written out.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node identifier; ids are dense in `[0, node_count)`.
pub type NodeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {id} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { id: NodeId, node_count: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
}

/// Undirected simple graph.
///
/// Invariants maintained by every constructor and mutator:
/// no self-loops, no duplicate edges, symmetric sorted adjacency lists,
/// and `edge_count` equal to half the sum of all degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `node_count` isolated vertices.
    pub fn new(node_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge iterator. Duplicate edges collapse to one;
    /// invalid endpoints or self-loops are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u as usize >= node_count {
                return Err(GraphError::NodeOutOfRange { id: u, node_count });
            }
            if v as usize >= node_count {
                return Err(GraphError::NodeOutOfRange { id: v, node_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut half_edges = 0usize;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            half_edges += list.len();
        }
        debug_assert_eq!(half_edges % 2, 0);
        Ok(Graph {
            adjacency,
            edge_count: half_edges / 2,
        })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut adjacency = Vec::with_capacity(n);
        for v in 0..n as NodeId {
            let mut list: Vec<NodeId> = (0..n as NodeId).collect();
            list.remove(v as usize);
            adjacency.push(list);
        }
        Graph {
            adjacency,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Inserts the edge `{u, v}`. Returns `true` if the edge was new;
    /// re-adding an existing edge is a no-op returning `false`.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool, GraphError> {
        let n = self.node_count();
        if u as usize >= n {
            return Err(GraphError::NodeOutOfRange { id: u, node_count: n });
        }
        if v as usize >= n {
            return Err(GraphError::NodeOutOfRange { id: v, node_count: n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adjacency[u as usize].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos_u) => {
                self.adjacency[u as usize].insert(pos_u, v);
                let pos_v = self.adjacency[v as usize]
                    .binary_search(&u)
                    .expect_err("adjacency symmetry violated");
                self.adjacency[v as usize].insert(pos_v, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u as usize)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    /// Iterates edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Partition of the vertices into maximal connected sets.
    ///
    /// Components are ordered by their smallest member and each component is
    /// listed in ascending order.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut visited = vec![false; n];
        let mut components = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            queue.clear();
            queue.push(start as NodeId);
            let mut component = vec![start as NodeId];
            while let Some(v) = queue.pop() {
                for &w in self.neighbors(v) {
                    if !visited[w as usize] {
                        visited[w as usize] = true;
                        component.push(w);
                        queue.push(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn component_count(&self) -> usize {
        self.connected_components().len()
    }
}
