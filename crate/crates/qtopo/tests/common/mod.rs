//! Shared test support: small-graph builders and an exhaustive minor
//! oracle, kept independent of the embedding implementation it checks.
#![allow(dead_code)]

use qtopo::graph::{Graph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v as NodeId - 1, v as NodeId))).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    let mut edges: Vec<(NodeId, NodeId)> = (1..n).map(|v| (v as NodeId - 1, v as NodeId)).collect();
    edges.push((0, n as NodeId - 1));
    Graph::from_edges(n, edges).unwrap()
}

pub fn star_graph(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v as NodeId))).unwrap()
}

pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c) as NodeId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).unwrap()
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn random_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Uniform random recursive tree on `n` nodes.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<(NodeId, NodeId)> = (1..n)
        .map(|v| (rng.random_range(0..v) as NodeId, v as NodeId))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Exhaustive minor-containment oracle for hosts with at most 16 vertices.
///
/// Searches over assignments of disjoint connected host-vertex subsets
/// (as bitmasks) to the problem vertices, requiring every problem edge to
/// be realized by host adjacency between the two subsets. Sound and
/// complete, independent of the routing heuristic.
pub fn minor_oracle(gp: &Graph, gq: &Graph) -> bool {
    let k = gp.node_count();
    let h = gq.node_count();
    assert!(h <= 16, "oracle host limit is 16 vertices");
    if k == 0 {
        return true;
    }
    if k > h {
        return false;
    }

    let adj: Vec<u16> = (0..h)
        .map(|v| {
            gq.neighbors(v as NodeId)
                .iter()
                .fold(0u16, |m, &w| m | (1 << w))
        })
        .collect();

    let connected = |mask: u16| -> bool {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u16 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v] & mask & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen == mask
    };

    // All connected non-empty subsets, with their neighborhoods.
    let full: u32 = (1u32 << h) - 1;
    let mut blocks: Vec<(u16, u16)> = Vec::new();
    for mask in 1..=full {
        let mask = mask as u16;
        if connected(mask) {
            let mut nbhd = 0u16;
            let mut m = mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                nbhd |= adj[v];
            }
            blocks.push((mask, nbhd));
        }
    }

    fn search(
        gp: &Graph,
        blocks: &[(u16, u16)],
        assigned: &mut Vec<(u16, u16)>,
        used: u16,
        h: usize,
    ) -> bool {
        let x = assigned.len();
        if x == gp.node_count() {
            return true;
        }
        let remaining_needed = gp.node_count() - x - 1;
        for &(mask, nbhd) in blocks {
            if mask & used != 0 {
                continue;
            }
            if (h - (used | mask).count_ones() as usize) < remaining_needed {
                continue;
            }
            // Every problem edge to an already-assigned vertex must be
            // realized by host adjacency between the blocks.
            let ok = gp.neighbors(x as NodeId).iter().all(|&b| {
                let b = b as usize;
                if b >= x {
                    return true;
                }
                let (bmask, bnbhd) = assigned[b];
                bnbhd & mask != 0 && nbhd & bmask != 0
            });
            if !ok {
                continue;
            }
            assigned.push((mask, nbhd));
            if search(gp, blocks, assigned, used | mask, h) {
                return true;
            }
            assigned.pop();
        }
        false
    }

    search(gp, &blocks, &mut Vec::with_capacity(k), 0, h)
}

#[cfg(test)]
mod oracle_self_checks {
    use super::*;

    #[test]
    fn clique_into_itself() {
        for n in 1..=5 {
            assert!(minor_oracle(&Graph::complete(n), &Graph::complete(n)));
        }
    }

    #[test]
    fn triangle_needs_a_cycle() {
        assert!(!minor_oracle(&Graph::complete(3), &path_graph(7)));
        assert!(!minor_oracle(&Graph::complete(3), &star_graph(6)));
        assert!(minor_oracle(&Graph::complete(3), &cycle_graph(7)));
    }

    #[test]
    fn k5_is_not_planar_grid_minor() {
        // 3x3 grids have treewidth 3: K_4 is a minor, K_5 is not.
        assert!(minor_oracle(&Graph::complete(4), &grid_graph(3, 3)));
        assert!(!minor_oracle(&Graph::complete(5), &grid_graph(3, 3)));
    }

    #[test]
    fn size_certificates() {
        assert!(!minor_oracle(&Graph::complete(4), &Graph::complete(3)));
        assert!(!minor_oracle(&Graph::complete(2), &Graph::new(2)));
        assert!(minor_oracle(&Graph::new(0), &Graph::new(0)));
    }
}
