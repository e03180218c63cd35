//! Chain-routing engine behind `find_embedding`.
//!
//! One try: shuffle the logical vertex order, route every vertex once, then
//! run refinement rounds that tear out and re-route each chain with updated
//! occupancy costs until no host vertex is shared by two chains. The cost of
//! occupying host vertex `v` is `penalty_base^usage(v)`, so overlapping
//! placements get exponentially discouraged while still being allowed as
//! intermediate states.
//!
//! Cost ties are broken by per-round seeded salts (then by node id), which
//! is what lets restarts and refinement rounds explore genuinely different
//! routings on symmetric problems; a try remains a pure function of its
//! seed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId};

const SOURCE: NodeId = NodeId::MAX;
const UNREACHED: f64 = f64::INFINITY;

/// Flat adjacency used in the routing hot path.
pub(crate) struct Csr {
    offsets: Vec<u32>,
    targets: Vec<NodeId>,
}

impl Csr {
    pub(crate) fn new(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        let mut targets = Vec::with_capacity(2 * graph.edge_count());
        for v in 0..n as NodeId {
            targets.extend_from_slice(graph.neighbors(v));
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub(crate) enum TryOutcome {
    Success,
    Failed,
    TimedOut,
}

pub(crate) struct RouterEngine<'a> {
    gp: &'a Csr,
    gq: &'a Csr,
    penalty_base: f64,
    /// Number of chains currently occupying each host vertex.
    usage: Vec<u32>,
    /// Cached `penalty_base^usage`.
    cost: Vec<f64>,
    /// Host vertices with usage >= 2.
    overfilled: usize,
    pub(crate) chains: Vec<Vec<NodeId>>,
    /// Per-vertex tie-break salts, refreshed from the try RNG every routing
    /// sweep.
    salt: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32, NodeId)>>,
    // Per-route buffers: distances and parents per embedded neighbor,
    // flattened as neighbor-major rows of host size.
    nbr_dist: Vec<f64>,
    nbr_parent: Vec<NodeId>,
    score: Vec<f64>,
    member_mark: Vec<u32>,
    member_epoch: u32,
}

/// Multi-source Dijkstra over host vertices, vertex costs paid on entry.
/// Sources get distance zero; ties pop by salt then node id, so parent
/// trees vary across rounds while staying seed-deterministic. Unreached
/// vertices keep infinite distance and a `SOURCE` parent.
fn dijkstra_into(
    gq: &Csr,
    cost: &[f64],
    salt: &[u32],
    heap: &mut BinaryHeap<Reverse<(u64, u32, NodeId)>>,
    sources: &[NodeId],
    dist: &mut [f64],
    parent: &mut [NodeId],
) {
    dist.fill(UNREACHED);
    parent.fill(SOURCE);
    heap.clear();
    for &s in sources {
        dist[s as usize] = 0.0;
        heap.push(Reverse((0u64, salt[s as usize], s)));
    }
    while let Some(Reverse((bits, _, v))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[v as usize] {
            continue; // stale entry
        }
        for &w in gq.neighbors(v) {
            let wi = w as usize;
            let candidate = d + cost[wi];
            if candidate < dist[wi] {
                dist[wi] = candidate;
                parent[wi] = v;
                heap.push(Reverse((candidate.to_bits(), salt[wi], w)));
            }
        }
    }
}

impl<'a> RouterEngine<'a> {
    pub(crate) fn new(gp: &'a Csr, gq: &'a Csr, penalty_base: f64) -> Self {
        let h = gq.node_count();
        let np = gp.node_count();
        RouterEngine {
            gp,
            gq,
            penalty_base,
            usage: vec![0; h],
            cost: vec![1.0; h],
            overfilled: 0,
            chains: vec![Vec::new(); np],
            salt: vec![0; h],
            heap: BinaryHeap::new(),
            nbr_dist: Vec::new(),
            nbr_parent: Vec::new(),
            score: vec![0.0; h],
            member_mark: vec![0; h],
            member_epoch: 0,
        }
    }

    fn reset(&mut self) {
        self.usage.fill(0);
        self.cost.fill(1.0);
        self.overfilled = 0;
        for chain in &mut self.chains {
            chain.clear();
        }
    }

    #[inline]
    fn bump_usage(&mut self, v: NodeId) {
        let u = &mut self.usage[v as usize];
        *u += 1;
        if *u == 2 {
            self.overfilled += 1;
        }
        self.cost[v as usize] = self.penalty_base.powi(*u as i32);
    }

    #[inline]
    fn drop_usage(&mut self, v: NodeId) {
        let u = &mut self.usage[v as usize];
        debug_assert!(*u > 0);
        *u -= 1;
        if *u == 1 {
            self.overfilled -= 1;
        }
        self.cost[v as usize] = self.penalty_base.powi(*u as i32);
    }

    fn tear_out(&mut self, x: usize) {
        let mut chain = std::mem::take(&mut self.chains[x]);
        for &v in &chain {
            self.drop_usage(v);
        }
        chain.clear();
        self.chains[x] = chain;
    }

    fn refresh_salt(&mut self, rng: &mut ChaCha8Rng) {
        for s in &mut self.salt {
            *s = rng.next_u32();
        }
    }

    /// Tears out and re-routes one logical vertex. Returns false when no
    /// feasible root exists (an unreachable neighbor chain).
    fn route_vertex(&mut self, x: usize) -> bool {
        self.tear_out(x);
        let h = self.gq.node_count();

        let embedded: Vec<usize> = self
            .gp
            .neighbors(x as NodeId)
            .iter()
            .map(|&n| n as usize)
            .filter(|&n| !self.chains[n].is_empty())
            .collect();

        if embedded.is_empty() {
            let root = self.argmin(|v, engine| engine.cost[v]);
            let Some(root) = root else { return false };
            self.chains[x].push(root);
            self.bump_usage(root);
            return true;
        }

        // Distances from every embedded neighbor chain.
        let rows = embedded.len();
        self.nbr_dist.resize(rows * h, 0.0);
        self.nbr_parent.resize(rows * h, SOURCE);
        for (i, &n) in embedded.iter().enumerate() {
            dijkstra_into(
                self.gq,
                &self.cost,
                &self.salt,
                &mut self.heap,
                &self.chains[n],
                &mut self.nbr_dist[i * h..(i + 1) * h],
                &mut self.nbr_parent[i * h..(i + 1) * h],
            );
        }

        // score(g) = cost(g) + sum over neighbors of the path cost to g,
        // counting g itself exactly once.
        for v in 0..h {
            self.score[v] = self.cost[v];
        }
        for i in 0..rows {
            let row = &self.nbr_dist[i * h..(i + 1) * h];
            for v in 0..h {
                self.score[v] += (row[v] - self.cost[v]).max(0.0);
            }
        }

        let root = self.argmin(|v, engine| engine.score[v]);
        let Some(root) = root else {
            return false; // every candidate is unreachable from some chain
        };

        // The new chain: the root plus the interior of each neighbor path.
        self.member_epoch += 1;
        let mark = self.member_epoch;
        let mut chain = std::mem::take(&mut self.chains[x]);
        chain.push(root);
        self.member_mark[root as usize] = mark;
        for i in 0..rows {
            // Interior of the path only: stop before the source endpoint,
            // which already belongs to the neighbor's chain.
            let row_parent = &self.nbr_parent[i * h..(i + 1) * h];
            let mut v = row_parent[root as usize];
            while v != SOURCE && row_parent[v as usize] != SOURCE {
                if self.member_mark[v as usize] != mark {
                    self.member_mark[v as usize] = mark;
                    chain.push(v);
                }
                v = row_parent[v as usize];
            }
        }
        for &v in &chain {
            self.bump_usage(v);
        }
        self.chains[x] = chain;
        true
    }

    /// Host vertex minimizing `key`, ties broken by salt then id; `None`
    /// when every key is non-finite.
    fn argmin(&self, key: impl Fn(usize, &Self) -> f64) -> Option<NodeId> {
        let mut root = None;
        let mut best = (f64::INFINITY, u32::MAX, NodeId::MAX);
        for v in 0..self.gq.node_count() {
            let value = key(v, self);
            if !value.is_finite() {
                continue;
            }
            let entry = (value, self.salt[v], v as NodeId);
            if entry < best {
                best = entry;
                root = Some(v as NodeId);
            }
        }
        root
    }

    fn overfill_metric(&self) -> (u32, u64) {
        let max = self.usage.iter().copied().max().unwrap_or(0);
        let total: u64 = self.usage.iter().map(|&u| u.saturating_sub(1) as u64).sum();
        (max.saturating_sub(1), total)
    }

    /// Runs one seeded try. `max_stagnant_rounds` refinement rounds without
    /// an overfill improvement abandon the try early.
    pub(crate) fn run_try(
        &mut self,
        rng: &mut ChaCha8Rng,
        max_rounds: u32,
        max_stagnant_rounds: u32,
        deadline: Option<Instant>,
    ) -> TryOutcome {
        self.reset();
        let np = self.gp.node_count();
        if np == 0 {
            return TryOutcome::Success;
        }
        let mut order: Vec<u32> = (0..np as u32).collect();
        order.shuffle(rng);
        self.refresh_salt(rng);
        for &x in &order {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return TryOutcome::TimedOut;
            }
            if !self.route_vertex(x as usize) {
                return TryOutcome::Failed;
            }
        }
        if self.overfilled == 0 {
            return TryOutcome::Success;
        }

        let mut best = (u32::MAX, u64::MAX);
        let mut stagnant = 0;
        for _ in 0..max_rounds {
            order.shuffle(rng);
            self.refresh_salt(rng);
            for &x in &order {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return TryOutcome::TimedOut;
                }
                if !self.route_vertex(x as usize) {
                    return TryOutcome::Failed;
                }
                if self.overfilled == 0 {
                    return TryOutcome::Success;
                }
            }
            let metric = self.overfill_metric();
            if metric < best {
                best = metric;
                stagnant = 0;
            } else {
                stagnant += 1;
                if stagnant >= max_stagnant_rounds {
                    return TryOutcome::Failed;
                }
            }
        }
        TryOutcome::Failed
    }
}

/// Removes host vertices from chains wherever the chain stays connected and
/// every logical edge stays realized. Chains must be pairwise disjoint.
pub(crate) fn trim_chains(gp: &Graph, gq: &Graph, chains: &mut [Vec<NodeId>]) {
    const FREE: u32 = u32::MAX;
    let mut owner = vec![FREE; gq.node_count()];
    for (x, chain) in chains.iter_mut().enumerate() {
        chain.sort_unstable();
        for &v in chain.iter() {
            debug_assert_eq!(owner[v as usize], FREE, "chains overlap");
            owner[v as usize] = x as u32;
        }
    }

    for x in 0..chains.len() {
        // Per logical edge (x, b): how many vertices of chain(x) have a host
        // neighbor inside chain(b); an edge stays realized while its count
        // stays positive.
        let nbrs: Vec<u32> = gp.neighbors(x as NodeId).to_vec();
        let mut cover = vec![0usize; nbrs.len()];
        let mut covers_of: Vec<Vec<usize>> = vec![Vec::new(); chains[x].len()];
        for (i, &v) in chains[x].iter().enumerate() {
            for &w in gq.neighbors(v) {
                let o = owner[w as usize];
                if o == FREE || o == x as u32 {
                    continue;
                }
                if let Ok(slot) = nbrs.binary_search(&o) {
                    if !covers_of[i].contains(&slot) {
                        covers_of[i].push(slot);
                        cover[slot] += 1;
                    }
                }
            }
        }

        loop {
            let mut removed = false;
            let mut i = 0;
            while i < chains[x].len() {
                if chains[x].len() == 1 {
                    break;
                }
                let v = chains[x][i];
                let edges_ok = covers_of[i].iter().all(|&slot| cover[slot] >= 2);
                if edges_ok && connected_without(gq, &owner, x as u32, &chains[x], v) {
                    for &slot in &covers_of[i] {
                        cover[slot] -= 1;
                    }
                    owner[v as usize] = FREE;
                    chains[x].remove(i);
                    covers_of.remove(i);
                    removed = true;
                } else {
                    i += 1;
                }
            }
            if !removed {
                break;
            }
        }
    }
}

/// Is the induced subgraph on `chain` minus `skip` still connected?
fn connected_without(gq: &Graph, owner: &[u32], x: u32, chain: &[NodeId], skip: NodeId) -> bool {
    let remaining = chain.len() - 1;
    if remaining == 0 {
        return false;
    }
    let start = *chain.iter().find(|&&v| v != skip).unwrap();
    let mut seen = vec![false; chain.len()];
    let pos = |v: NodeId| chain.binary_search(&v).unwrap();
    seen[pos(start)] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in gq.neighbors(v) {
            if w == skip || owner[w as usize] != x {
                continue;
            }
            let p = pos(w);
            if !seen[p] {
                seen[p] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == remaining
}

