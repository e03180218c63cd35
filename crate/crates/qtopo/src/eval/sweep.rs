//! Sweep orchestration: evaluate many host configurations with a bounded
//! worker pool, checkpointing completed rows so an interrupted sweep
//! resumes without recomputation.
//!
//! Rows are pure functions of `(config, embed params, attempts_per_n)`, so
//! the assembled output is identical regardless of worker count or
//! interleaving; results are always emitted in configuration order.

use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{verify_embedding, EmbedParams, Embedding};
use crate::eval::{max_embeddable_clique, qpu_record, MaxCliqueResult};
use crate::graph::Graph;
use crate::topology::QpuConfig;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("checkpoint {path} line {line}: {message}")]
    Checkpoint {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("witness embedding for {label} failed re-verification: {report}")]
    InvalidWitness { label: String, report: String },
}

fn io_err(path: &Path, source: std::io::Error) -> SweepError {
    SweepError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One sweep row: either a completed evaluation with its witness embedding,
/// or a per-config failure that never aborts the sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub label: String,
    pub result: Option<MaxCliqueResult>,
    pub witness: Option<Embedding>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Where in-flight sweep state lives. `rows` accumulates completed rows in
/// completion order; `labels` is the atomically rewritten list of completed
/// labels that makes a rows file trustworthy after a crash.
#[derive(Debug, Clone)]
pub struct CheckpointPaths {
    pub rows: PathBuf,
    pub labels: PathBuf,
}

impl CheckpointPaths {
    /// Conventional sibling files next to the final output path.
    pub fn for_output(out: &Path) -> Self {
        let mut rows = out.as_os_str().to_owned();
        rows.push(".partial");
        let mut labels = out.as_os_str().to_owned();
        labels.push(".checkpoint");
        CheckpointPaths {
            rows: rows.into(),
            labels: labels.into(),
        }
    }

    pub fn clear(&self) -> std::io::Result<()> {
        for path in [&self.rows, &self.labels] {
            if path.exists() {
                std::fs::remove_file(path)?;
            }
        }
        Ok(())
    }
}

pub struct SweepRunner {
    pub embed_params: EmbedParams,
    pub attempts_per_n: u32,
    pub workers: usize,
    pub checkpoint: Option<CheckpointPaths>,
}

/// Evaluates one configuration into a row. Generation failures are captured
/// in the row's `error` field.
pub fn evaluate_config(
    config: &QpuConfig,
    embed_params: &EmbedParams,
    attempts_per_n: u32,
) -> SweepRow {
    let label = config.label();
    match config.build() {
        Err(e) => SweepRow {
            label,
            result: None,
            witness: None,
            error: Some(e.to_string()),
        },
        Ok(graph) => evaluate_host(config.family(), &label, &graph, embed_params, attempts_per_n),
    }
}

/// Evaluates an already-built host graph (also used for custom hosts).
pub fn evaluate_host(
    family: crate::topology::Family,
    label: &str,
    graph: &Graph,
    embed_params: &EmbedParams,
    attempts_per_n: u32,
) -> SweepRow {
    let record = qpu_record(family, label, graph);
    let outcome = max_embeddable_clique(graph, embed_params, attempts_per_n);
    SweepRow {
        label: label.to_string(),
        result: Some(MaxCliqueResult {
            qpu: record,
            max: outcome.max,
            stats: outcome.stats,
            attempts_log: outcome.attempts_log,
        }),
        witness: Some(outcome.witness.with_label(label)),
        error: None,
    }
}

struct CheckpointSink {
    rows_file: File,
    labels_path: PathBuf,
    labels: Vec<String>,
}

impl CheckpointSink {
    fn append(&mut self, row: &SweepRow) -> Result<(), SweepError> {
        let line = serde_json::to_string(row).expect("sweep row serializes");
        writeln!(self.rows_file, "{line}").map_err(|e| io_err(&self.labels_path, e))?;
        self.rows_file
            .flush()
            .map_err(|e| io_err(&self.labels_path, e))?;
        self.labels.push(row.label.clone());
        // Atomic write-rename so the labels file never names a torn row.
        let tmp = self.labels_path.with_extension("checkpoint.tmp");
        let mut body = String::new();
        for label in &self.labels {
            body.push_str(&serde_json::to_string(&LabelLine { label }).unwrap());
            body.push('\n');
        }
        std::fs::write(&tmp, body).map_err(|e| io_err(&tmp, e))?;
        std::fs::rename(&tmp, &self.labels_path).map_err(|e| io_err(&self.labels_path, e))?;
        Ok(())
    }
}

#[derive(Serialize)]
struct LabelLine<'a> {
    label: &'a str,
}

#[derive(Deserialize)]
struct LabelLineOwned {
    label: String,
}

fn load_checkpoint(paths: &CheckpointPaths) -> Result<HashMap<String, SweepRow>, SweepError> {
    let mut done = HashMap::new();
    if !paths.labels.exists() || !paths.rows.exists() {
        return Ok(done);
    }
    let mut completed: HashSet<String> = HashSet::new();
    let labels_file = File::open(&paths.labels).map_err(|e| io_err(&paths.labels, e))?;
    for (i, line) in BufReader::new(labels_file).lines().enumerate() {
        let line = line.map_err(|e| io_err(&paths.labels, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LabelLineOwned =
            serde_json::from_str(&line).map_err(|e| SweepError::Checkpoint {
                path: paths.labels.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
        completed.insert(parsed.label);
    }

    let rows_file = File::open(&paths.rows).map_err(|e| io_err(&paths.rows, e))?;
    let lines: Vec<String> = BufReader::new(rows_file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| io_err(&paths.rows, e))?;
    let last = lines.len();
    for (i, line) in lines.into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SweepRow>(&line) {
            Ok(row) => {
                if completed.contains(&row.label) {
                    done.insert(row.label.clone(), row);
                }
            }
            // A torn final line from a killed run is fine; the labels file
            // never references it.
            Err(_) if i + 1 == last => {}
            Err(e) => {
                return Err(SweepError::Checkpoint {
                    path: paths.rows.clone(),
                    line: i + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(done)
}

/// Runs the sweep over `configs`, resuming from the checkpoint when one is
/// configured. Rows come back in configuration order; completed witnesses
/// are re-verified against regenerated hosts before returning.
pub fn run_sweep(configs: &[QpuConfig], runner: &SweepRunner) -> Result<Vec<SweepRow>, SweepError> {
    let mut done = match &runner.checkpoint {
        Some(paths) => load_checkpoint(paths)?,
        None => HashMap::new(),
    };

    let pending: Vec<&QpuConfig> = configs
        .iter()
        .filter(|c| !done.contains_key(&c.label()))
        .collect();

    if !pending.is_empty() {
        let sink = match &runner.checkpoint {
            Some(paths) => {
                let rows_file = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&paths.rows)
                    .map_err(|e| io_err(&paths.rows, e))?;
                let mut labels: Vec<String> = done.keys().cloned().collect();
                labels.sort();
                Some(Mutex::new(CheckpointSink {
                    rows_file,
                    labels_path: paths.labels.clone(),
                    labels,
                }))
            }
            None => None,
        };

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(runner.workers.max(1))
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?;
        let computed: Result<Vec<SweepRow>, SweepError> = pool.install(|| {
            pending
                .par_iter()
                .map(|config| {
                    let row =
                        evaluate_config(config, &runner.embed_params, runner.attempts_per_n);
                    if let Some(sink) = &sink {
                        sink.lock().expect("sink lock").append(&row)?;
                    }
                    Ok(row)
                })
                .collect()
        });
        for row in computed? {
            done.insert(row.label.clone(), row);
        }
    }

    let rows: Vec<SweepRow> = configs
        .iter()
        .map(|c| done.get(&c.label()).expect("every config evaluated").clone())
        .collect();

    // Re-verify every witness against a freshly generated host.
    for (config, row) in configs.iter().zip(&rows) {
        let Some(result) = &row.result else { continue };
        let Some(witness) = &row.witness else {
            return Err(SweepError::InvalidWitness {
                label: row.label.clone(),
                report: "row has a result but no witness embedding".into(),
            });
        };
        let host = config.build().map_err(|e| SweepError::InvalidWitness {
            label: row.label.clone(),
            report: e.to_string(),
        })?;
        let clique = Graph::complete(result.max);
        let report = verify_embedding(&clique, &host, witness);
        if !report.is_valid() {
            return Err(SweepError::InvalidWitness {
                label: row.label.clone(),
                report: report.to_string(),
            });
        }
    }

    Ok(rows)
}
