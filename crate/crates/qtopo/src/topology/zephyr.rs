//! Zephyr hardware graphs.
//!
//! `Zephyr(m, t)` is an `m x m` array of cross-shaped tiles with `t` qubits
//! per cross arm, addressed by five coordinates `(u, w, k, j, z)`:
//! orientation `u` in {0,1}, transverse index `w` in `[0, 2m]`, tile offset
//! `k` in `[0, t)`, half index `j` in {0,1}, and longitudinal tile index `z`
//! in `[0, m)`. Node ids are the lexicographic rank of the coordinate.
//!
//! Three edge families exist:
//! - external: `(u,w,k,j,z) ~ (u,w,k,j,z+1)`;
//! - odd: `(u,w,k,0,z) ~ (u,w,k,1,z)` and `(u,w,k,1,z) ~ (u,w,k,0,z+1)`;
//! - internal: `(0,w0,k0,j0,z0) ~ (1,w1,k1,j1,z1)` iff
//!   `w1 - (2*z0 + j0)` and `w0 - (2*z1 + j1)` are both in {0, 1}.
//!
//! The resulting counts are `4*t*m*(2m+1)` nodes and
//! `16*t^2*m^2 + 4*t*(2m+1)*(m-1) + 2*t*(2m+1)*(2m-1)` edges.

use serde::{Deserialize, Serialize};

use super::TopologyError;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZephyrParams {
    /// Grid size.
    pub m: u32,
    /// Tile size (qubits per cross arm).
    pub t: u32,
}

impl ZephyrParams {
    pub fn new(m: u32, t: u32) -> Result<Self, TopologyError> {
        if m < 1 || t < 1 {
            return Err(TopologyError::InvalidZephyrParams { m, t });
        }
        Ok(ZephyrParams { m, t })
    }
}

/// Five-coordinate Zephyr address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZephyrCoord {
    pub u: u32,
    pub w: u32,
    pub k: u32,
    pub j: u32,
    pub z: u32,
}

impl ZephyrCoord {
    pub fn new(u: u32, w: u32, k: u32, j: u32, z: u32) -> Self {
        ZephyrCoord { u, w, k, j, z }
    }

    fn in_bounds(&self, p: ZephyrParams) -> bool {
        self.u <= 1 && self.w <= 2 * p.m && self.k < p.t && self.j <= 1 && self.z < p.m
    }
}

pub fn zephyr_node_count(p: ZephyrParams) -> usize {
    4 * p.t as usize * p.m as usize * (2 * p.m as usize + 1)
}

/// Closed-form edge counts `(internal, external, odd)`.
pub fn zephyr_edge_family_counts(p: ZephyrParams) -> (usize, usize, usize) {
    let (m, t) = (p.m as usize, p.t as usize);
    let internal = 16 * t * t * m * m;
    let external = 4 * t * (2 * m + 1) * (m - 1);
    let odd = 2 * t * (2 * m + 1) * (2 * m - 1);
    (internal, external, odd)
}

pub fn zephyr_edge_count(p: ZephyrParams) -> usize {
    let (internal, external, odd) = zephyr_edge_family_counts(p);
    internal + external + odd
}

/// Lexicographic rank of a coordinate in `(u, w, k, j, z)` order.
pub fn zephyr_linear_index(c: ZephyrCoord, p: ZephyrParams) -> Result<NodeId, TopologyError> {
    if !c.in_bounds(p) {
        return Err(TopologyError::ZephyrCoordOutOfBounds { coord: c, m: p.m, t: p.t });
    }
    let id = (((c.u * (2 * p.m + 1) + c.w) * p.t + c.k) * 2 + c.j) * p.m + c.z;
    Ok(id)
}

/// Inverse of [`zephyr_linear_index`].
pub fn zephyr_coord(index: NodeId, p: ZephyrParams) -> Result<ZephyrCoord, TopologyError> {
    if index as usize >= zephyr_node_count(p) {
        return Err(TopologyError::ZephyrIndexOutOfBounds { index, m: p.m, t: p.t });
    }
    let z = index % p.m;
    let rest = index / p.m;
    let j = rest % 2;
    let rest = rest / 2;
    let k = rest % p.t;
    let rest = rest / p.t;
    let w = rest % (2 * p.m + 1);
    let u = rest / (2 * p.m + 1);
    Ok(ZephyrCoord { u, w, k, j, z })
}

/// Builds the Zephyr graph for `p`. Identical parameters produce a
/// byte-identical edge list.
pub fn zephyr_graph(p: ZephyrParams) -> Graph {
    let (m, t) = (p.m, p.t);
    let idx = |c: ZephyrCoord| -> NodeId {
        zephyr_linear_index(c, p).expect("generated coordinate is in bounds")
    };
    let mut edges = Vec::with_capacity(zephyr_edge_count(p));

    // External: consecutive z along the same line.
    for u in 0..2 {
        for w in 0..=2 * m {
            for k in 0..t {
                for j in 0..2 {
                    for z in 0..m.saturating_sub(1) {
                        edges.push((
                            idx(ZephyrCoord::new(u, w, k, j, z)),
                            idx(ZephyrCoord::new(u, w, k, j, z + 1)),
                        ));
                    }
                }
            }
        }
    }

    // Odd: the two halves of the same line, pairing z with z and z+1 with z.
    for u in 0..2 {
        for w in 0..=2 * m {
            for k in 0..t {
                for z in 0..m {
                    edges.push((
                        idx(ZephyrCoord::new(u, w, k, 0, z)),
                        idx(ZephyrCoord::new(u, w, k, 1, z)),
                    ));
                }
                for z in 0..m.saturating_sub(1) {
                    edges.push((
                        idx(ZephyrCoord::new(u, w, k, 1, z)),
                        idx(ZephyrCoord::new(u, w, k, 0, z + 1)),
                    ));
                }
            }
        }
    }

    // Internal: orientation 0 crosses orientation 1 where the transverse
    // index of each lands on the other's longitudinal position.
    // For a node (0, w0, k0, j0, z0) the partners are w1 in
    // {2*z0+j0, 2*z0+j0+1}, any k1, and (j1, z1) with 2*z1+j1 in {w0-1, w0}.
    for w0 in 0..=2 * m {
        for k0 in 0..t {
            for j0 in 0..2 {
                for z0 in 0..m {
                    let base = 2 * z0 + j0;
                    for w1 in base..=base + 1 {
                        for k1 in 0..t {
                            // 2*z1 + j1 must land on w0-1 or w0, within [0, 2m).
                            for pos in w0.saturating_sub(1)..=w0.min(2 * m - 1) {
                                let (j1, z1) = (pos % 2, pos / 2);
                                edges.push((
                                    idx(ZephyrCoord::new(0, w0, k0, j0, z0)),
                                    idx(ZephyrCoord::new(1, w1, k1, j1, z1)),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    Graph::from_edges(zephyr_node_count(p), edges).expect("generated edges are valid")
}
