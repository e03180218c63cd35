//! Minor embedding: chain model, randomized chain-routing heuristic,
//! embedding verifier, and chain-length statistics.
//!
//! An embedding maps every vertex of the problem graph to a chain (a
//! connected set of host vertices) such that chains are pairwise disjoint
//! and every problem edge is realized by at least one host edge between the
//! two chains. `find_embedding` searches for one with seeded restarts; the
//! result is a pure function of `(problem, host, params)`.

mod router;
pub mod verify;

use std::time::Instant;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use router::{Csr, RouterEngine, TryOutcome};
pub use verify::{verify_embedding, ValidityReport, Violation};

/// Search-budget and determinism knobs for [`find_embedding`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedParams {
    /// Independent restarts.
    pub max_tries: u32,
    /// Refinement passes per try.
    pub max_rounds: u32,
    /// Seed for the whole search; restarts derive their own seeds from it.
    pub seed: u64,
    /// Base of the exponential occupancy cost, > 1.
    pub penalty_base: f64,
    /// Optional wall-clock budget. Leaving it unset keeps results
    /// reproducible; with a budget, results near the boundary depend on
    /// machine speed.
    pub timeout_ms: Option<u64>,
    /// Refinement rounds without an overfill improvement before a try is
    /// abandoned early, in the spirit of the classic heuristic's
    /// no-improvement cutoff. Budget-neutral for successful instances.
    pub max_stagnant_rounds: u32,
}

impl Default for EmbedParams {
    fn default() -> Self {
        EmbedParams {
            max_tries: 16,
            max_rounds: 32,
            seed: 0,
            penalty_base: 10.0,
            timeout_ms: None,
            max_stagnant_rounds: 6,
        }
    }
}

impl EmbedParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedFailure {
    #[error("no embedding can exist: {0}")]
    Impossible(String),
    #[error("no embedding found after {tries} tries")]
    Exhausted { tries: u32 },
    #[error("embedding search timed out after {elapsed_ms} ms")]
    Timeout { elapsed_ms: u64 },
}

/// A connected set of host vertices representing one logical vertex,
/// stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain(Vec<NodeId>);

impl Chain {
    pub fn new(mut nodes: Vec<NodeId>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        Chain(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

/// A minor embedding of a problem graph into a host graph. Chains are
/// indexed by logical vertex id. Serialization keeps keys in this order so
/// equal embeddings serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub problem_size: usize,
    pub qpu_label: String,
    pub chains: Vec<Chain>,
}

impl Embedding {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.qpu_label = label.into();
        self
    }

    pub fn total_chain_length(&self) -> usize {
        self.chains.iter().map(Chain::len).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("embedding serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Searches for a minor embedding of `gp` into `gq`.
///
/// Each try shuffles the logical vertex order with a seed derived from
/// `params.seed`, routes every vertex via overlap-penalized cheapest paths,
/// then refines by tearing out and re-routing chains until no host vertex
/// is shared. Successful embeddings get a final chain-trimming pass that
/// removes host vertices wherever connectivity and edge realization allow,
/// shrinking the total chain length.
pub fn find_embedding(
    gp: &Graph,
    gq: &Graph,
    params: &EmbedParams,
) -> Result<Embedding, EmbedFailure> {
    assert!(
        params.penalty_base > 1.0,
        "penalty_base must exceed 1 for overlap costs to grow"
    );
    assert!(params.max_tries > 0 && params.max_rounds > 0);
    let started = Instant::now();
    if let Some(reason) = impossibility_certificate(gp, gq) {
        return Err(EmbedFailure::Impossible(reason));
    }
    if gp.node_count() == 0 {
        return Ok(Embedding {
            problem_size: 0,
            qpu_label: String::new(),
            chains: Vec::new(),
        });
    }

    let deadline = params
        .timeout_ms
        .map(|ms| started + std::time::Duration::from_millis(ms));
    let gp_csr = Csr::new(gp);
    let gq_csr = Csr::new(gq);
    let mut engine = RouterEngine::new(&gp_csr, &gq_csr, params.penalty_base);
    let mut master = ChaCha8Rng::seed_from_u64(params.seed);

    for _ in 0..params.max_tries {
        let try_seed = master.next_u64();
        let mut rng = ChaCha8Rng::seed_from_u64(try_seed);
        match engine.run_try(&mut rng, params.max_rounds, params.max_stagnant_rounds, deadline) {
            TryOutcome::Success => {
                let mut chains = std::mem::take(&mut engine.chains);
                router::trim_chains(gp, gq, &mut chains);
                return Ok(Embedding {
                    problem_size: gp.node_count(),
                    qpu_label: String::new(),
                    chains: chains.into_iter().map(Chain::new).collect(),
                });
            }
            TryOutcome::Failed => continue,
            TryOutcome::TimedOut => {
                return Err(EmbedFailure::Timeout {
                    elapsed_ms: started.elapsed().as_millis() as u64,
                })
            }
        }
    }
    Err(EmbedFailure::Exhausted {
        tries: params.max_tries,
    })
}

/// Cheap sound proofs that no embedding exists.
fn impossibility_certificate(gp: &Graph, gq: &Graph) -> Option<String> {
    if gp.node_count() > gq.node_count() {
        return Some(format!(
            "problem has {} nodes but host has only {}",
            gp.node_count(),
            gq.node_count()
        ));
    }
    if gp.edge_count() > gq.edge_count() {
        return Some(format!(
            "problem has {} edges but host has only {}; every logical edge needs a distinct host edge",
            gp.edge_count(),
            gq.edge_count()
        ));
    }
    let host_max = gq.max_degree();
    let problem_max = gp.max_degree();
    if host_max <= 2 {
        // Minors of disjoint paths and cycles keep maximum degree <= 2;
        // the same argument caps it at the host's own maximum below that.
        if problem_max > host_max {
            return Some(format!(
                "problem max degree {problem_max} exceeds what a host of max degree {host_max} can realize"
            ));
        }
    } else {
        // A chain of length L exposes at most L*max_deg - 2(L-1) endpoints,
        // so a logical vertex of degree d needs ceil((d-2)/(max_deg-2))
        // hosts; the per-vertex minima must fit in the host.
        let denom = (host_max - 2) as u64;
        let mut required: u64 = 0;
        for d in gp.degrees() {
            let need = if d <= 2 {
                1
            } else {
                ((d as u64 - 2) + denom - 1) / denom
            };
            required += need.max(1);
            if required > gq.node_count() as u64 {
                return Some(format!(
                    "chains realizing the problem's degrees need more than the host's {} nodes",
                    gq.node_count()
                ));
            }
        }
    }
    None
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("chain statistics are undefined for an empty embedding")]
    EmptyEmbedding,
}

/// Descriptive statistics of the chain lengths of an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub mean: f64,
    /// Middle element of the sorted lengths; average of the two middles for
    /// an even count.
    pub median: f64,
    /// Most frequent length, smallest value on frequency ties.
    pub mode: usize,
    pub max: usize,
    /// Sum of all chain lengths.
    pub total: usize,
}

pub fn chain_stats(embedding: &Embedding) -> Result<ChainStats, StatsError> {
    if embedding.chains.is_empty() {
        return Err(StatsError::EmptyEmbedding);
    }
    let mut lengths: Vec<usize> = embedding.chains.iter().map(Chain::len).collect();
    lengths.sort_unstable();
    let count = lengths.len();
    let total: usize = lengths.iter().sum();
    let mean = total as f64 / count as f64;
    let median = if count % 2 == 1 {
        lengths[count / 2] as f64
    } else {
        (lengths[count / 2 - 1] + lengths[count / 2]) as f64 / 2.0
    };
    let mut mode = lengths[0];
    let mut mode_count = 0;
    let mut i = 0;
    while i < count {
        let mut j = i;
        while j < count && lengths[j] == lengths[i] {
            j += 1;
        }
        // Strict improvement keeps the smallest length on ties.
        if j - i > mode_count {
            mode_count = j - i;
            mode = lengths[i];
        }
        i = j;
    }
    Ok(ChainStats {
        mean,
        median,
        mode,
        max: *lengths.last().unwrap(),
        total,
    })
}
