//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all).
//!
//! Criterion 10 is long-running and `#[ignore]`d; run it explicitly with
//! `cargo test -p qtopo --test acceptance -- --ignored --nocapture`.

mod common;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use common::{minor_oracle, random_gnp, random_tree, rng};
use qtopo::embed::{find_embedding, verify_embedding, EmbedParams};
use qtopo::eval::sweep::{run_sweep, SweepRow, SweepRunner};
use qtopo::eval::{max_embeddable_clique, normalize, trend_summary, MaxCliqueResult};
use qtopo::graph::Graph;
use qtopo::metrics::regularity;
use qtopo::report::{write_results_csv, write_results_jsonl};
use qtopo::topology::{
    desk_configs, havel_hakimi_graph, sweep_configs, zephyr_edge_count, zephyr_graph,
    zephyr_node_count, Family, HavelHakimiParams, QpuConfig, ZephyrParams,
};
use rand::Rng;

fn status(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Desk-grid and matched-pair evaluations per seed, shared across criteria
/// so the determinism and trend checks don't recompute identical rows.
struct Bundle {
    desk: Vec<SweepRow>,
    pair: Vec<SweepRow>,
}

fn bundle(seed: u64) -> Arc<Bundle> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Bundle>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = cache.lock().unwrap().get(&seed) {
        return Arc::clone(found);
    }
    let runner = SweepRunner {
        embed_params: EmbedParams::default().with_seed(seed),
        attempts_per_n: 3,
        workers: workers(),
        checkpoint: None,
    };
    let desk = run_sweep(&desk_configs(), &runner).expect("desk sweep runs");
    let pair_configs = vec![
        QpuConfig::Zephyr(ZephyrParams::new(4, 4).unwrap()),
        QpuConfig::HavelHakimi(HavelHakimiParams::new(17, 576).unwrap()),
    ];
    let pair = run_sweep(&pair_configs, &runner).expect("pair sweep runs");
    let made = Arc::new(Bundle { desk, pair });
    cache.lock().unwrap().insert(seed, Arc::clone(&made));
    made
}

#[test]
fn criterion_1_zephyr_golden_counts() {
    // Closed-form check over the whole grid is pure arithmetic.
    let formula_start = Instant::now();
    let mut formula_nodes = Vec::new();
    for m in 2..=7 {
        for t in 1..=25 {
            let p = ZephyrParams::new(m, t).unwrap();
            formula_nodes.push((p, zephyr_node_count(p), zephyr_edge_count(p)));
        }
    }
    let smallest = ZephyrParams::new(2, 1).unwrap();
    let largest = ZephyrParams::new(7, 25).unwrap();
    assert_eq!(zephyr_node_count(smallest), 40);
    assert_eq!(zephyr_edge_count(smallest), 114);
    assert_eq!(zephyr_node_count(largest), 10_500);
    assert_eq!(zephyr_edge_count(largest), 508_750);
    let formula_elapsed = formula_start.elapsed();
    assert!(
        formula_elapsed < Duration::from_secs(1),
        "formula check took {formula_elapsed:?}"
    );

    // Every grid config generates with exactly the closed-form counts.
    let mut largest_elapsed = Duration::ZERO;
    for &(p, nodes, edges) in &formula_nodes {
        let start = Instant::now();
        let graph = zephyr_graph(p);
        let elapsed = start.elapsed();
        if p == largest {
            largest_elapsed = elapsed;
        }
        assert_eq!(graph.node_count(), nodes, "nodes of {p:?}");
        assert_eq!(graph.edge_count(), edges, "edges of {p:?}");
    }
    assert!(
        largest_elapsed < Duration::from_secs(10),
        "largest generation took {largest_elapsed:?}"
    );
    status(
        "criterion 1 (Zephyr golden counts)",
        true,
        &format!(
            "40/114 and 10500/508750 exact; 150 configs match formulas; formulas {formula_elapsed:?}, largest build {largest_elapsed:?}"
        ),
    );
}

#[test]
fn criterion_2_havel_hakimi_golden_counts() {
    let small = havel_hakimi_graph(HavelHakimiParams::new(5, 50).unwrap()).unwrap();
    assert_eq!(small.edge_count(), 125);
    let start = Instant::now();
    let largest = havel_hakimi_graph(HavelHakimiParams::new(105, 10_200).unwrap()).unwrap();
    let largest_elapsed = start.elapsed();
    assert_eq!(largest.edge_count(), 535_500);
    assert!(
        largest_elapsed < Duration::from_secs(30),
        "largest generation took {largest_elapsed:?}"
    );

    // Every graphical sweep config is exactly deg-regular; the three
    // deg >= n grid corners cannot exist as graphs and must error cleanly.
    let mut regular = 0;
    let mut impossible = Vec::new();
    for config in sweep_configs() {
        let QpuConfig::HavelHakimi(p) = config else { continue };
        match havel_hakimi_graph(p) {
            Ok(graph) => {
                assert!(
                    graph.degrees().all(|d| d == p.deg as usize),
                    "{config:?} not {}-regular",
                    p.deg
                );
                assert_eq!(regularity(&graph).unwrap(), 1.0);
                regular += 1;
            }
            Err(_) => impossible.push((p.deg, p.num_qubits)),
        }
    }
    assert_eq!(regular, 147);
    assert_eq!(impossible, vec![(55, 50), (80, 50), (105, 50)]);
    status(
        "criterion 2 (Havel-Hakimi golden counts)",
        true,
        &format!(
            "125 and 535500 edges exact; 147 graphical configs deg-regular, 3 deg>=n corners rejected; largest build {largest_elapsed:?}"
        ),
    );
}

#[test]
fn criterion_3_sweep_grid_cardinality() {
    let configs = sweep_configs();
    let zephyr = configs.iter().filter(|c| c.family() == Family::Zephyr).count();
    let hh = configs.iter().filter(|c| c.family() == Family::HavelHakimi).count();
    let pass = zephyr == 150 && hh == 150;
    status(
        "criterion 3 (sweep-grid cardinality)",
        pass,
        &format!("{zephyr} Zephyr + {hh} Havel-Hakimi configs"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_degree_ceiling() {
    // The coupler rules are pinned by the exact published node/edge counts
    // (criterion 1). Under them a degree-20 node needs two odd and two
    // external couplers at once, which requires an interior longitudinal
    // position and hence m >= 3: Zephyr(2,4) tops out at 19 = 4t + 3.
    // The check below states the criterion as written; the m = 2 case is a
    // known, documented impossibility.
    let mut degrees = Vec::new();
    for m in 2..=7 {
        let graph = zephyr_graph(ZephyrParams::new(m, 4).unwrap());
        degrees.push((m, graph.max_degree()));
    }
    let pass = degrees.iter().all(|&(_, d)| d == 20);
    status(
        "criterion 4 (degree ceiling, t = 4)",
        pass,
        &format!(
            "max degrees {degrees:?}; m = 2 yields 4t+3 = 19, unattainable alongside the exact 40/114 edge counts"
        ),
    );
    assert!(pass, "max degree of zephyr_graph(m, 4) must equal 20 for all m in [2, 7]; got {degrees:?}");
}

#[test]
fn criterion_5_embedding_soundness() {
    let start = Instant::now();
    let mut generator = rng(0x5EED);
    let hosts: Vec<Graph> = vec![
        zephyr_graph(ZephyrParams::new(1, 1).unwrap()),
        zephyr_graph(ZephyrParams::new(1, 2).unwrap()),
        zephyr_graph(ZephyrParams::new(2, 1).unwrap()),
        havel_hakimi_graph(HavelHakimiParams::new(3, 10).unwrap()).unwrap(),
        havel_hakimi_graph(HavelHakimiParams::new(4, 15).unwrap()).unwrap(),
        havel_hakimi_graph(HavelHakimiParams::new(6, 20).unwrap()).unwrap(),
        random_gnp(&mut generator, 20, 0.15),
        random_gnp(&mut generator, 30, 0.25),
        random_gnp(&mut generator, 25, 0.4),
    ];
    let total = 520;
    let mut successes = 0;
    for case in 0..total {
        let np = generator.random_range(1..=12);
        let density = generator.random_range(0.2..0.8);
        let problem = random_gnp(&mut generator, np, density);
        let host = &hosts[case % hosts.len()];
        let params = EmbedParams {
            seed: case as u64,
            max_tries: 8,
            ..EmbedParams::default()
        };
        if let Ok(embedding) = find_embedding(&problem, host, &params) {
            let report = verify_embedding(&problem, host, &embedding);
            assert!(
                report.is_valid(),
                "case {case}: success with violations: {report}"
            );
            successes += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = elapsed < Duration::from_secs(120);
    status(
        "criterion 5 (embedding soundness)",
        pass,
        &format!("{total} randomized instances, {successes} successes, zero violations, {elapsed:?}"),
    );
    assert!(pass, "soundness suite took {elapsed:?}");
    assert!(successes > total / 4, "suspiciously few successes: {successes}");
}

#[test]
fn criterion_6_oracle_agreement() {
    let mut generator = rng(0x0AC1E);
    let mut corpus: Vec<(Graph, Graph)> = Vec::new();
    // Structured instances with known answers plus a randomized mix.
    corpus.push((Graph::complete(3), common::path_graph(9)));
    corpus.push((Graph::complete(3), common::cycle_graph(9)));
    corpus.push((Graph::complete(4), common::grid_graph(3, 3)));
    corpus.push((Graph::complete(5), common::grid_graph(3, 3)));
    corpus.push((Graph::complete(4), common::star_graph(8)));
    corpus.push((Graph::complete(5), Graph::complete(9)));
    for case in 0..150 {
        let np = generator.random_range(2..=5);
        let nq = generator.random_range(4..=9);
        let p_problem = generator.random_range(0.3..0.9);
        let p_host = generator.random_range(0.2..0.7);
        let _ = case;
        corpus.push((
            random_gnp(&mut generator, np, p_problem),
            random_gnp(&mut generator, nq, p_host),
        ));
    }

    let mut yes = 0;
    let mut found = 0;
    let mut impossible_claims = 0;
    for (idx, (problem, host)) in corpus.iter().enumerate() {
        let exists = minor_oracle(problem, host);
        let params = EmbedParams {
            max_tries: 64,
            seed: idx as u64,
            ..EmbedParams::default()
        };
        match find_embedding(problem, host, &params) {
            Ok(embedding) => {
                assert!(verify_embedding(problem, host, &embedding).is_valid());
                if !exists {
                    impossible_claims += 1;
                }
                if exists {
                    found += 1;
                }
            }
            Err(_) => {}
        }
        if exists {
            yes += 1;
        }
    }
    let rate = 100.0 * found as f64 / yes as f64;
    let pass = impossible_claims == 0 && rate >= 95.0;
    status(
        "criterion 6 (oracle agreement)",
        pass,
        &format!(
            "{} instances, {yes} oracle-yes, heuristic found {found} ({rate:.1}%), {impossible_claims} impossible claims",
            corpus.len()
        ),
    );
    assert_eq!(impossible_claims, 0, "the heuristic must never beat the oracle");
    assert!(rate >= 95.0, "success rate {rate:.1}% below 95%");
}

#[test]
fn criterion_7_clique_host_exactness() {
    let start = Instant::now();
    let params = EmbedParams::default();
    for n in 1..=12 {
        let outcome = max_embeddable_clique(&Graph::complete(n), &params, 3);
        assert_eq!(outcome.max, n, "K_{n} host must embed exactly K_{n}");
    }
    // Trees: a single vertex gives 1; any tree with an edge gives exactly 2.
    let single = max_embeddable_clique(&Graph::new(1), &params, 3);
    assert_eq!(single.max, 1);
    let mut generator = rng(7);
    let mut tree_maxes = Vec::new();
    for n in [2usize, 5, 9, 14] {
        let tree = random_tree(&mut generator, n);
        tree_maxes.push(max_embeddable_clique(&tree, &params, 3).max);
    }
    let star = common::star_graph(9);
    tree_maxes.push(max_embeddable_clique(&star, &params, 3).max);
    let path = common::path_graph(10);
    tree_maxes.push(max_embeddable_clique(&path, &params, 3).max);
    let elapsed = start.elapsed();
    let all_two = tree_maxes.iter().all(|&m| m == 2);
    let pass = all_two && elapsed < Duration::from_secs(30);
    status(
        "criterion 7 (clique-host exactness)",
        pass,
        &format!("K_N exact for N in [1,12]; tree maxes {tree_maxes:?}; {elapsed:?}"),
    );
    assert!(all_two, "tree hosts must top out at 2: {tree_maxes:?}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

fn desk_output_bytes(rows: &[SweepRow]) -> (Vec<u8>, Vec<u8>) {
    let mut jsonl = Vec::new();
    write_results_jsonl(rows, &mut jsonl).unwrap();
    let mut csv = Vec::new();
    write_results_csv(rows, &mut csv).unwrap();
    (jsonl, csv)
}

#[test]
fn criterion_8_desk_sweep_determinism() {
    // One run comes from the shared cache, the other is fresh; both go
    // through the full sweep path including witness re-verification.
    let cached = bundle(0);
    let runner = SweepRunner {
        embed_params: EmbedParams::default().with_seed(0),
        attempts_per_n: 3,
        workers: workers(),
        checkpoint: None,
    };
    let fresh = run_sweep(&desk_configs(), &runner).expect("desk sweep runs");
    let (jsonl_a, csv_a) = desk_output_bytes(&cached.desk);
    let (jsonl_b, csv_b) = desk_output_bytes(&fresh);
    let pass = jsonl_a == jsonl_b && csv_a == csv_b;
    status(
        "criterion 8 (desk sweep determinism)",
        pass,
        &format!(
            "two seed-0 desk sweeps: JSONL {} bytes, CSV {} bytes, byte-identical={pass}",
            jsonl_a.len(),
            csv_a.len()
        ),
    );
    assert!(pass, "desk sweeps with identical seeds diverged");
}

fn results_of(rows: &[SweepRow]) -> Vec<MaxCliqueResult> {
    rows.iter().filter_map(|r| r.result.clone()).collect()
}

#[test]
fn criterion_9_directional_reproduction() {
    const SEED_SETS: [[u64; 5]; 3] = [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9], [10, 11, 12, 13, 14]];
    let mut first_set_elapsed = None;
    for (set_index, seeds) in SEED_SETS.iter().enumerate() {
        let start = Instant::now();
        let mut chain_wins = 0;
        let mut fit_wins = 0;
        for &seed in seeds {
            let bundle = bundle(seed);
            let pair = results_of(&bundle.pair);
            let zephyr_median = pair
                .iter()
                .find(|r| r.qpu.family == Family::Zephyr)
                .expect("pair has the Zephyr host")
                .stats
                .median;
            let hh_median = pair
                .iter()
                .find(|r| r.qpu.family == Family::HavelHakimi)
                .expect("pair has the Havel-Hakimi host")
                .stats
                .median;
            if hh_median <= zephyr_median {
                chain_wins += 1;
            }

            let mut all_results = results_of(&bundle.desk);
            all_results.extend(pair);
            let points = normalize(&all_results);
            let zephyr_fit = trend_summary(&points, Family::Zephyr).unwrap();
            let hh_fit = trend_summary(&points, Family::HavelHakimi).unwrap();
            if hh_fit.r_squared >= zephyr_fit.r_squared {
                fit_wins += 1;
            }
        }
        let elapsed = start.elapsed();
        if set_index == 0 {
            first_set_elapsed = Some(elapsed);
        }
        let pass = chain_wins >= 4 && fit_wins >= 4;
        println!(
            "acceptance criterion 9, seed set {set_index}: chains {chain_wins}/5, linear fit {fit_wins}/5, {elapsed:?}"
        );
        if pass {
            let within_budget = first_set_elapsed.unwrap() < Duration::from_secs(15 * 60);
            status(
                "criterion 9 (directional reproduction)",
                within_budget,
                &format!(
                    "seed set {set_index}: shorter median chains {chain_wins}/5, higher linear-fit R^2 {fit_wins}/5; first set took {:?}",
                    first_set_elapsed.unwrap()
                ),
            );
            assert!(
                within_budget,
                "first seed set took {:?}",
                first_set_elapsed.unwrap()
            );
            return;
        }
    }
    status(
        "criterion 9 (directional reproduction)",
        false,
        "claim failed across 3 distinct seed sets",
    );
    panic!("directional claims failed in all 3 seed sets");
}

/// Paper-scale anchor. Long-running (roughly an hour per host on a desktop
/// core); excluded from the default run.
#[test]
#[ignore]
fn criterion_10_paper_scale_anchor() {
    for (m, t) in [(7u32, 10u32), (6, 13)] {
        let params = ZephyrParams::new(m, t).unwrap();
        let host = zephyr_graph(params);
        assert!(host.node_count() >= 4000, "anchor host must have >= 4000 nodes");
        let outcome = max_embeddable_clique(&host, &EmbedParams::default(), 1);
        let y = outcome.max as f64 / host.node_count() as f64;
        let pass = y > 0.01 && y < 0.1;
        status(
            "criterion 10 (paper-scale anchor)",
            pass,
            &format!(
                "Zephyr({m},{t}): {} nodes, K_{} embedded, y = {y:.4}, bracket (0.01, 0.1)",
                host.node_count(),
                outcome.max
            ),
        );
        assert!(pass, "normalized max {y} outside (0.01, 0.1)");
    }
}

#[test]
fn witnesses_and_logs_are_audit_consistent() {
    // Supplementary to the criteria: the attempt log must justify max, and
    // the largest probed failure is max + 1 whenever the search scanned.
    let host = zephyr_graph(ZephyrParams::new(2, 1).unwrap());
    let outcome = max_embeddable_clique(&host, &EmbedParams::default(), 3);
    let best_success = outcome
        .attempts_log
        .iter()
        .filter(|a| a.success)
        .map(|a| a.n)
        .max()
        .unwrap();
    assert_eq!(best_success, outcome.max);
    let confirm = outcome
        .attempts_log
        .iter()
        .find(|a| a.n == outcome.max + 1)
        .expect("max + 1 probed");
    assert!(!confirm.success);
    assert_eq!(confirm.tries_used, 3, "failures consume the whole budget");
    // Regression pin for the smallest sweep host: established by running
    // the finished implementation once with the default budget, seed 0.
    assert_eq!(outcome.max, 7, "Zephyr(2,1) seed-0 regression value");
}
