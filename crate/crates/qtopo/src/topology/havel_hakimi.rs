//! Havel-Hakimi realization of constant degree sequences.
//!
//! The generator is fully deterministic: at every step the node with the
//! largest residual degree (smallest id on ties) is connected to the
//! next-largest residual-degree nodes (same tie-break), then retired.
//! For a constant sequence this always yields an exactly `deg`-regular
//! graph when the sequence is graphical, i.e. `deg < num_qubits` and
//! `deg * num_qubits` is even.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::TopologyError;
use crate::graph::{Graph, NodeId};

/// Largest uniform degree considered physically plausible.
pub const MAX_PLAUSIBLE_DEGREE: u32 = 105;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HavelHakimiParams {
    /// Uniform target degree.
    pub deg: u32,
    /// Number of nodes.
    pub num_qubits: u32,
}

impl HavelHakimiParams {
    /// Validates basic bounds and the plausibility cap. Graphicality of the
    /// sequence is checked by [`havel_hakimi_graph`] so that non-graphical
    /// combinations report which condition failed.
    pub fn new(deg: u32, num_qubits: u32) -> Result<Self, TopologyError> {
        if deg < 1 || num_qubits < 1 {
            return Err(TopologyError::InvalidHavelHakimiParams { deg, num_qubits });
        }
        if deg > MAX_PLAUSIBLE_DEGREE {
            return Err(TopologyError::DegreeAbovePlausibilityCap {
                deg,
                cap: MAX_PLAUSIBLE_DEGREE,
            });
        }
        Ok(HavelHakimiParams { deg, num_qubits })
    }
}

pub fn havel_hakimi_edge_count(p: HavelHakimiParams) -> usize {
    p.deg as usize * p.num_qubits as usize / 2
}

/// Builds the Havel-Hakimi graph for `p`, or reports the violated
/// graphicality condition of the constant sequence.
pub fn havel_hakimi_graph(p: HavelHakimiParams) -> Result<Graph, TopologyError> {
    let (deg, n) = (p.deg, p.num_qubits);
    // Erdos-Gallai for a constant sequence reduces to these two conditions.
    if deg >= n {
        return Err(TopologyError::NotGraphical {
            deg,
            num_qubits: n,
            condition: "degree must be smaller than the node count".into(),
        });
    }
    if (deg as u64 * n as u64) % 2 != 0 {
        return Err(TopologyError::NotGraphical {
            deg,
            num_qubits: n,
            condition: "sum of degrees deg * num_qubits must be even".into(),
        });
    }

    // Nodes bucketed by residual degree; BTreeSet keeps ids ascending so the
    // smallest-id tie-break falls out of iteration order.
    let mut residual = vec![deg; n as usize];
    let mut buckets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); deg as usize + 1];
    buckets[deg as usize].extend(0..n);
    let mut highest = deg as usize;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(havel_hakimi_edge_count(p));

    loop {
        while highest > 0 && buckets[highest].is_empty() {
            highest -= 1;
        }
        if highest == 0 {
            break;
        }
        let head = *buckets[highest].iter().next().unwrap();
        buckets[highest].remove(&head);
        let wanted = residual[head as usize] as usize;
        residual[head as usize] = 0;

        // The `wanted` nodes with the largest residuals, ids ascending
        // within each residual level.
        let mut targets: Vec<NodeId> = Vec::with_capacity(wanted);
        let mut level = highest;
        while targets.len() < wanted && level > 0 {
            for &v in &buckets[level] {
                if targets.len() == wanted {
                    break;
                }
                targets.push(v);
            }
            level -= 1;
        }
        assert_eq!(
            targets.len(),
            wanted,
            "graphical sequence ran out of attachment targets"
        );

        for v in targets {
            edges.push((head, v));
            let r = residual[v as usize] as usize;
            buckets[r].remove(&v);
            if r > 1 {
                buckets[r - 1].insert(v);
            }
            residual[v as usize] -= 1;
        }
    }

    Ok(Graph::from_edges(n as usize, edges).expect("generated edges are valid"))
}
