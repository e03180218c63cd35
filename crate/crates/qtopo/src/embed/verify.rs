//! Constructive verification of the minor relation.
//!
//! An empty report certifies that the embedding witnesses the problem graph
//! as a minor of the host: every logical vertex has a non-empty connected
//! chain, chains are pairwise disjoint, and every logical edge is realized
//! by a host edge between the two chains. Malformed input produces
//! violations, never panics.

use serde::Serialize;

use crate::graph::{Graph, NodeId};

use super::Embedding;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The chain map has no entry for this problem vertex.
    MissingLogicalVertex { vertex: NodeId },
    /// The chain map has an entry beyond the problem's vertices.
    UnknownLogicalVertex { vertex: NodeId },
    /// The declared problem size disagrees with the problem graph.
    ProblemSizeMismatch { declared: usize, actual: usize },
    EmptyChain { vertex: NodeId },
    HostOutOfRange { vertex: NodeId, host: NodeId },
    /// The induced host subgraph on the chain is not connected.
    DisconnectedChain { vertex: NodeId },
    /// Two chains share a host vertex.
    ChainOverlap {
        host: NodeId,
        first: NodeId,
        second: NodeId,
    },
    /// No host edge connects the chains of a problem edge.
    UnrealizedEdge { a: NodeId, b: NodeId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingLogicalVertex { vertex } => {
                write!(f, "logical vertex {vertex} has no chain")
            }
            Violation::UnknownLogicalVertex { vertex } => {
                write!(f, "chain for unknown logical vertex {vertex}")
            }
            Violation::ProblemSizeMismatch { declared, actual } => {
                write!(f, "embedding declares problem size {declared}, graph has {actual}")
            }
            Violation::EmptyChain { vertex } => write!(f, "chain of vertex {vertex} is empty"),
            Violation::HostOutOfRange { vertex, host } => {
                write!(f, "chain of vertex {vertex} uses out-of-range host {host}")
            }
            Violation::DisconnectedChain { vertex } => {
                write!(f, "chain of vertex {vertex} is not connected")
            }
            Violation::ChainOverlap { host, first, second } => {
                write!(f, "host vertex {host} is shared by chains {first} and {second}")
            }
            Violation::UnrealizedEdge { a, b } => {
                write!(f, "logical edge ({a}, {b}) has no realizing host edge")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid minor embedding");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Checks `embedding` against the problem graph `gp` and host graph `gq`,
/// listing every violation found.
pub fn verify_embedding(gp: &Graph, gq: &Graph, embedding: &Embedding) -> ValidityReport {
    let mut violations = Vec::new();
    let np = gp.node_count();
    let nq = gq.node_count();

    if embedding.problem_size != np {
        violations.push(Violation::ProblemSizeMismatch {
            declared: embedding.problem_size,
            actual: np,
        });
    }
    for vertex in embedding.chains.len()..np {
        violations.push(Violation::MissingLogicalVertex {
            vertex: vertex as NodeId,
        });
    }
    for vertex in np..embedding.chains.len() {
        violations.push(Violation::UnknownLogicalVertex {
            vertex: vertex as NodeId,
        });
    }

    // Chains that pass the local checks; only they take part in the
    // pairwise checks so one malformed chain does not cascade.
    let mut usable = vec![false; embedding.chains.len()];
    for (x, chain) in embedding.chains.iter().enumerate() {
        let vertex = x as NodeId;
        if chain.is_empty() {
            violations.push(Violation::EmptyChain { vertex });
            continue;
        }
        let mut in_range = true;
        for &host in chain.nodes() {
            if host as usize >= nq {
                violations.push(Violation::HostOutOfRange { vertex, host });
                in_range = false;
            }
        }
        if !in_range {
            continue;
        }
        if !chain_connected(gq, chain.nodes()) {
            violations.push(Violation::DisconnectedChain { vertex });
            continue;
        }
        usable[x] = true;
    }

    // Overlaps: one violation per shared host and later owner, keeping the
    // first owner as the named collision partner.
    let mut owner: Vec<Option<NodeId>> = vec![None; nq];
    for (x, chain) in embedding.chains.iter().enumerate() {
        if chain.nodes().iter().any(|&h| h as usize >= nq) {
            continue; // already reported as out-of-range
        }
        for &host in chain.nodes() {
            match owner[host as usize] {
                None => owner[host as usize] = Some(x as NodeId),
                Some(first) => {
                    violations.push(Violation::ChainOverlap {
                        host,
                        first,
                        second: x as NodeId,
                    });
                }
            }
        }
    }

    for (a, b) in gp.edges() {
        let (ai, bi) = (a as usize, b as usize);
        if ai >= usable.len() || bi >= usable.len() || !usable[ai] || !usable[bi] {
            continue; // already reported above
        }
        if !chains_adjacent(gq, &embedding.chains[ai], &embedding.chains[bi]) {
            violations.push(Violation::UnrealizedEdge { a, b });
        }
    }

    ValidityReport { violations }
}

fn chain_connected(gq: &Graph, nodes: &[NodeId]) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; nodes.len()];
    seen[0] = true;
    let mut stack = vec![nodes[0]];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in gq.neighbors(v) {
            if let Ok(pos) = nodes.binary_search(&w) {
                if !seen[pos] {
                    seen[pos] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
    }
    count == nodes.len()
}

fn chains_adjacent(gq: &Graph, a: &super::Chain, b: &super::Chain) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .nodes()
        .iter()
        .any(|&u| gq.neighbors(u).iter().any(|&w| large.contains(w)))
}
