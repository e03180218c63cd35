//! Result emission: JSON-lines and CSV exports of sweep rows, plus the
//! figure-data and summary reports derived from a results file.
//!
//! All output is deterministic given its input: stable row order, fixed key
//! order, and floats printed in their shortest round-trip form.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::sweep::SweepRow;
use crate::eval::{normalize, trend_summary, MaxCliqueResult, NormalizedPoint, TrendSummary};
use crate::topology::Family;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("results line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("results file contains no rows")]
    Empty,
}

/// Failed sweep rows appear in the results file as label + error lines.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct FailedRowLine {
    label: String,
    error: String,
}

pub const CSV_HEADER: &str = "family,label,nodes,edges,avg_degree,regularity,modularity,max,mean_chain,median_chain,mode_chain,x_norm,y_norm";

fn opt_f64(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_row(r: &MaxCliqueResult) -> String {
    let nodes = r.qpu.node_count as f64;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.qpu.family,
        r.qpu.label,
        r.qpu.node_count,
        r.qpu.edge_count,
        r.qpu.average_degree,
        opt_f64(r.qpu.regularity),
        opt_f64(r.qpu.modularity),
        r.max,
        r.stats.mean,
        r.stats.median,
        r.stats.mode,
        r.qpu.average_degree / nodes,
        r.max as f64 / nodes,
    )
}

/// Writes one `MaxCliqueResult` JSON object per completed row and a
/// `{label, error}` object per failed row, in row order.
pub fn write_results_jsonl<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    for row in rows {
        match (&row.result, &row.error) {
            (Some(result), _) => {
                writeln!(out, "{}", serde_json::to_string(result).expect("row serializes"))?
            }
            (None, Some(error)) => {
                let line = FailedRowLine {
                    label: row.label.clone(),
                    error: error.clone(),
                };
                writeln!(out, "{}", serde_json::to_string(&line).expect("row serializes"))?
            }
            (None, None) => {}
        }
    }
    Ok(())
}

pub fn write_results_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        if let Some(result) = &row.result {
            writeln!(out, "{}", csv_row(result))?;
        }
    }
    Ok(())
}

/// Reads a results file back, keeping completed rows and counting failed
/// ones. Malformed lines report their line number.
pub fn read_results_jsonl(path: &Path) -> Result<(Vec<MaxCliqueResult>, usize), ReportError> {
    let file = File::open(path)?;
    let mut results = Vec::new();
    let mut failed = 0usize;
    let mut any = false;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        any = true;
        match serde_json::from_str::<MaxCliqueResult>(&line) {
            Ok(result) => results.push(result),
            Err(_) => match serde_json::from_str::<FailedRowLine>(&line) {
                Ok(_) => failed += 1,
                Err(e) => {
                    return Err(ReportError::Line {
                        line: i + 1,
                        message: e.to_string(),
                    })
                }
            },
        }
    }
    if !any {
        return Err(ReportError::Empty);
    }
    Ok((results, failed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Fig2a,
    Fig2b,
    Summary,
}

/// Per-family trend summaries plus a one-line comparison verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub zephyr: Option<TrendSummary>,
    pub havel_hakimi: Option<TrendSummary>,
    pub verdict: String,
}

fn family_mean_median_chain(results: &[MaxCliqueResult], family: Family) -> Option<f64> {
    let medians: Vec<f64> = results
        .iter()
        .filter(|r| r.qpu.family == family)
        .map(|r| r.stats.median)
        .collect();
    if medians.is_empty() {
        None
    } else {
        Some(medians.iter().sum::<f64>() / medians.len() as f64)
    }
}

fn verdict_fragment(
    family: Family,
    trend: &Option<TrendSummary>,
    mean_median: Option<f64>,
) -> String {
    match (trend, mean_median) {
        (Some(t), Some(m)) => format!(
            "{family}: slope={} r2={} mean_median_chain={}",
            t.slope, t.r_squared, m
        ),
        _ => format!("{family}: insufficient points"),
    }
}

pub fn summary_report(results: &[MaxCliqueResult]) -> SummaryReport {
    let points: Vec<NormalizedPoint> = normalize(results);
    let zephyr = trend_summary(&points, Family::Zephyr).ok();
    let hh = trend_summary(&points, Family::HavelHakimi).ok();
    let zephyr_mm = family_mean_median_chain(results, Family::Zephyr);
    let hh_mm = family_mean_median_chain(results, Family::HavelHakimi);

    let mut verdict = format!(
        "{} | {}",
        verdict_fragment(Family::HavelHakimi, &hh, hh_mm),
        verdict_fragment(Family::Zephyr, &zephyr, zephyr_mm),
    );
    if let (Some(h), Some(z)) = (&hh, &zephyr) {
        let better_fit = if h.r_squared >= z.r_squared {
            Family::HavelHakimi
        } else {
            Family::Zephyr
        };
        verdict.push_str(&format!(" | more linear scaling: {better_fit}"));
    }
    if let (Some(h), Some(z)) = (hh_mm, zephyr_mm) {
        let shorter = if h <= z { Family::HavelHakimi } else { Family::Zephyr };
        verdict.push_str(&format!(" | shorter chains on average: {shorter}"));
    }

    SummaryReport {
        zephyr,
        havel_hakimi: hh,
        verdict,
    }
}

/// Renders `kind` from a results file into `out_path`. Returns the verdict
/// line for `Summary`, `None` otherwise.
pub fn report(
    results_path: &Path,
    out_path: &Path,
    kind: ReportKind,
) -> Result<Option<String>, ReportError> {
    let (results, _failed) = read_results_jsonl(results_path)?;
    let points = normalize(&results);
    let mut out = String::new();
    let verdict = match kind {
        ReportKind::Fig2a => {
            out.push_str("x_norm,y_norm,family\n");
            for p in &points {
                out.push_str(&format!("{},{},{}\n", p.x, p.y, p.family));
            }
            None
        }
        ReportKind::Fig2b => {
            out.push_str("x_norm,median_chain,family\n");
            for p in &points {
                out.push_str(&format!("{},{},{}\n", p.x, p.median_chain, p.family));
            }
            None
        }
        ReportKind::Summary => {
            let summary = summary_report(&results);
            out.push_str(&serde_json::to_string_pretty(&summary).expect("summary serializes"));
            out.push('\n');
            Some(summary.verdict)
        }
    };
    std::fs::write(out_path, out)?;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::ChainStats;
    use crate::eval::QpuRecord;

    fn row(family: Family, label: &str, nodes: usize, avg: f64, max: usize) -> SweepRow {
        SweepRow {
            label: label.into(),
            result: Some(MaxCliqueResult {
                qpu: QpuRecord {
                    family,
                    label: label.into(),
                    node_count: nodes,
                    edge_count: (avg * nodes as f64 / 2.0) as usize,
                    average_degree: avg,
                    regularity: Some(1.0),
                    modularity: None,
                    component_count: 1,
                },
                max,
                stats: ChainStats { mean: 1.5, median: 1.0, mode: 1, max: 3, total: max },
                attempts_log: Vec::new(),
            }),
            witness: None,
            error: None,
        }
    }

    #[test]
    fn csv_row_matches_schema() {
        let r = row(Family::Custom, "k10", 10, 9.0, 10);
        let line = csv_row(r.result.as_ref().unwrap());
        assert_eq!(line, "custom,k10,10,45,9,1,,10,1.5,1,1,0.9,1");
        assert_eq!(CSV_HEADER.split(',').count(), line.split(',').count());
    }

    #[test]
    fn results_jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let rows = vec![
            row(Family::Zephyr, "zephyr_m2_t1", 40, 5.7, 8),
            SweepRow {
                label: "hh_deg3_n3".into(),
                result: None,
                witness: None,
                error: Some("not graphical".into()),
            },
        ];
        let mut buf = Vec::new();
        write_results_jsonl(&rows, &mut buf).unwrap();
        std::fs::write(&path, &buf).unwrap();
        let (results, failed) = read_results_jsonl(&path).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(failed, 1);
    }

    #[test]
    fn empty_results_file_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        std::fs::write(&path, "").unwrap();
        assert!(matches!(read_results_jsonl(&path), Err(ReportError::Empty)));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        std::fs::write(&path, "{\"nonsense\":true}\n").unwrap();
        let err = read_results_jsonl(&path).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn fig2a_report_for_single_row() {
        let dir = tempfile::tempdir().unwrap();
        let results = dir.path().join("results.jsonl");
        let out = dir.path().join("fig2a.csv");
        let rows = vec![row(Family::Custom, "k10", 10, 9.0, 10)];
        let mut buf = Vec::new();
        write_results_jsonl(&rows, &mut buf).unwrap();
        std::fs::write(&results, &buf).unwrap();
        report(&results, &out, ReportKind::Fig2a).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text, "x_norm,y_norm,family\n0.9,1,custom\n");
    }

    #[test]
    fn summary_includes_both_families() {
        let rows: Vec<SweepRow> = vec![
            row(Family::Zephyr, "z1", 40, 5.7, 8),
            row(Family::Zephyr, "z2", 80, 6.0, 12),
            row(Family::Zephyr, "z3", 160, 8.0, 20),
            row(Family::HavelHakimi, "h1", 50, 5.0, 8),
            row(Family::HavelHakimi, "h2", 100, 10.0, 16),
            row(Family::HavelHakimi, "h3", 200, 20.0, 40),
        ];
        let results: Vec<MaxCliqueResult> = rows.iter().map(|r| r.result.clone().unwrap()).collect();
        let summary = summary_report(&results);
        assert!(summary.zephyr.is_some());
        assert!(summary.havel_hakimi.is_some());
        assert!(summary.verdict.contains("havel_hakimi: slope="));
        assert!(summary.verdict.contains("zephyr: slope="));
    }
}
