//! Expressiveness evaluation: largest embeddable clique per host,
//! qubit-count normalization, and per-family trend fits.

pub mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{
    chain_stats, find_embedding, verify_embedding, ChainStats, EmbedParams, Embedding,
};
use crate::graph::Graph;
use crate::metrics::topology_metrics;
use crate::topology::Family;

/// Descriptors of one host graph, as recorded in every sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpuRecord {
    pub family: Family,
    pub label: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub regularity: Option<f64>,
    pub modularity: Option<f64>,
    pub component_count: usize,
}

pub fn qpu_record(family: Family, label: impl Into<String>, graph: &Graph) -> QpuRecord {
    let m = topology_metrics(graph);
    QpuRecord {
        family,
        label: label.into(),
        node_count: m.node_count,
        edge_count: m.edge_count,
        average_degree: m.average_degree,
        regularity: m.regularity,
        modularity: m.modularity,
        component_count: graph.component_count(),
    }
}

/// One probe of the clique search: size tried, whether a verified embedding
/// was found, and how many heuristic attempts ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub n: usize,
    pub success: bool,
    pub tries_used: u32,
}

/// Largest verified clique embedding found for one host.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCliqueResult {
    pub qpu: QpuRecord,
    pub max: usize,
    pub stats: ChainStats,
    pub attempts_log: Vec<AttemptRecord>,
}

/// Search outcome before a host record is attached; keeps the witness
/// embedding so callers can re-verify it.
#[derive(Debug, Clone)]
pub struct CliqueSearchOutcome {
    pub max: usize,
    pub stats: ChainStats,
    pub attempts_log: Vec<AttemptRecord>,
    pub witness: Embedding,
}

/// Splitmix-style mixer deriving independent seeds per (base, n, attempt),
/// so probe order cannot influence any probe's outcome.
pub(crate) fn derive_seed(base: u64, n: u64, attempt: u64) -> u64 {
    let mut x = base
        ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ attempt.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Finds the largest `n` such that `K_n` has a verified embedding into
/// `gq`, by doubling from `n = 2` until the first failure and then
/// scanning upward from the largest success; the scan stops at the first
/// failing size, which keeps the expensive failure-confirmation probes
/// (a full retry budget each) down to one per search. Each probe runs up
/// to `attempts_per_n` independent `find_embedding` calls with derived
/// seeds; a probe succeeds only if the verifier accepts the embedding.
/// The heuristic is incomplete, so the result is a lower bound on true
/// embeddability; the attempt log keeps the search auditable.
pub fn max_embeddable_clique(
    gq: &Graph,
    params: &EmbedParams,
    attempts_per_n: u32,
) -> CliqueSearchOutcome {
    assert!(gq.node_count() > 0, "host graph must be non-empty");
    assert!(attempts_per_n > 0, "at least one attempt per size");
    let mut log = Vec::new();

    let probe = |n: usize, log: &mut Vec<AttemptRecord>| -> Option<Embedding> {
        let clique = Graph::complete(n);
        let mut found = None;
        let mut tries_used = 0;
        for attempt in 0..attempts_per_n {
            tries_used = attempt + 1;
            let attempt_params = EmbedParams {
                seed: derive_seed(params.seed, n as u64, attempt as u64),
                ..params.clone()
            };
            if let Ok(embedding) = find_embedding(&clique, gq, &attempt_params) {
                if verify_embedding(&clique, gq, &embedding).is_valid() {
                    found = Some(embedding);
                    break;
                }
            }
        }
        if found.is_none() {
            tries_used = attempts_per_n;
        }
        log.push(AttemptRecord {
            n,
            success: found.is_some(),
            tries_used,
        });
        found
    };

    // n = 1 always embeds into a non-empty host.
    let witness_1 = probe(1, &mut log).expect("a single vertex always embeds");
    let mut best = (1usize, witness_1);

    // Doubling until the first failure.
    let mut lo = 1usize;
    let mut hi = None;
    let mut n = 2usize;
    loop {
        match probe(n, &mut log) {
            Some(w) => {
                lo = n;
                best = (n, w);
                if n >= gq.node_count() {
                    break; // nothing larger can fit
                }
                n *= 2;
            }
            None => {
                hi = Some(n);
                break;
            }
        }
    }

    // Ascending scan between the largest success and the smallest failure,
    // so max + 1 is always probed and confirmed failing.
    if let Some(hi) = hi {
        for candidate in lo + 1..hi {
            match probe(candidate, &mut log) {
                Some(w) => best = (candidate, w),
                None => break,
            }
        }
    }

    let (max, witness) = best;
    let stats = chain_stats(&witness).expect("witness embedding is non-empty");
    CliqueSearchOutcome {
        max,
        stats,
        attempts_log: log,
        witness,
    }
}

/// Host-size-normalized coordinates of one sweep row: `x` is the average
/// degree over the qubit count, `y` the largest clique size over the qubit
/// count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPoint {
    pub family: Family,
    pub x: f64,
    pub y: f64,
    pub median_chain: f64,
}

pub fn normalize(results: &[MaxCliqueResult]) -> Vec<NormalizedPoint> {
    results
        .iter()
        .map(|r| NormalizedPoint {
            family: r.qpu.family,
            x: r.qpu.average_degree / r.qpu.node_count as f64,
            y: r.max as f64 / r.qpu.node_count as f64,
            median_chain: r.stats.median,
        })
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrendError {
    #[error("trend fit needs at least 3 points for family {family}, got {count}")]
    TooFewPoints { family: Family, count: usize },
}

/// Least-squares fits of `y` on `x` for one family's normalized points:
/// a linear fit (slope, intercept, R^2) and the quadratic coefficient of a
/// degree-2 fit, whose sign indicates concavity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSummary {
    pub family: Family,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub concavity_indicator: f64,
    pub point_count: usize,
}

pub fn trend_summary(points: &[NormalizedPoint], family: Family) -> Result<TrendSummary, TrendError> {
    let xs: Vec<f64> = points
        .iter()
        .filter(|p| p.family == family)
        .map(|p| p.x)
        .collect();
    let ys: Vec<f64> = points
        .iter()
        .filter(|p| p.family == family)
        .map(|p| p.y)
        .collect();
    let count = xs.len();
    if count < 3 {
        return Err(TrendError::TooFewPoints { family, count });
    }

    let n = count as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum();
    let r_squared = if ss_tot == 0.0 {
        if ss_res.abs() < 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    Ok(TrendSummary {
        family,
        slope,
        intercept,
        r_squared,
        concavity_indicator: quadratic_coefficient(&xs, &ys),
        point_count: count,
    })
}

/// Quadratic coefficient of the least-squares parabola through the points,
/// from the 3x3 normal equations; 0 when the system is degenerate.
fn quadratic_coefficient(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let x2 = x * x;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        t0 += y;
        t1 += x * y;
        t2 += x2 * y;
    }
    // Solve [n s1 s2; s1 s2 s3; s2 s3 s4] [c0 c1 c2]^T = [t0 t1 t2]^T and
    // report c2 via Cramer's rule.
    let det = n * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2);
    if det.abs() < 1e-12 * (n * s4).max(1.0) {
        return 0.0;
    }
    let numerator = n * (s2 * t2 - t1 * s3) - s1 * (s1 * t2 - t1 * s2) + t0 * (s1 * s3 - s2 * s2);
    numerator / det
}
