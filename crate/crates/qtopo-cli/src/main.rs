//! `qtopo` command line: generate hardware topologies, compute their
//! metrics, embed problem graphs, search for the largest embeddable clique,
//! run configuration sweeps, and derive figure data from sweep results.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 embedding failure
//! or sweep rows with recorded failures.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use qtopo::embed::{find_embedding, verify_embedding, EmbedParams};
use qtopo::eval::sweep::{run_sweep, CheckpointPaths, SweepRunner};
use qtopo::eval::sweep::{evaluate_host, SweepRow};
use qtopo::graph::Graph;
use qtopo::io::{read_edge_list, write_edge_list};
use qtopo::metrics::topology_metrics;
use qtopo::report::{report, write_results_csv, write_results_jsonl, ReportKind};
use qtopo::topology::{
    desk_configs, sweep_configs, Family, HavelHakimiParams, QpuConfig, ZephyrParams,
};

/// Environment variable overriding the default worker count.
const WORKERS_ENV: &str = "QTOPO_WORKERS";

#[derive(Parser)]
#[command(name = "qtopo", version, about = "QPU topology and minor-embedding benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hardware topology as an edge-list file
    Generate(GenerateArgs),
    /// Compute topology metrics of an edge-list file
    Metrics(MetricsArgs),
    /// Find a minor embedding of a problem graph into a host graph
    Embed(EmbedArgs),
    /// Find the largest embeddable clique of a host graph
    Maxclique(MaxcliqueArgs),
    /// Evaluate a grid of configurations with checkpointed resume
    Sweep(SweepArgs),
    /// Derive figure data or a trend summary from sweep results
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Zephyr,
    Hh,
}

#[derive(Args)]
struct GenerateArgs {
    /// Topology family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Zephyr grid size
    #[arg(long)]
    m: Option<u32>,
    /// Zephyr tile size
    #[arg(long)]
    t: Option<u32>,
    /// Havel-Hakimi uniform degree
    #[arg(long)]
    deg: Option<u32>,
    /// Havel-Hakimi node count
    #[arg(long)]
    n: Option<u32>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append a one-line JSON record of the topology metrics
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// Edge-list file
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct EmbedParamsArgs {
    /// Seed for the embedding search
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent restarts per search
    #[arg(long, default_value_t = 16)]
    tries: u32,
    /// Refinement passes per try
    #[arg(long, default_value_t = 32)]
    rounds: u32,
    /// Base of the exponential overlap cost (> 1)
    #[arg(long, default_value_t = 10.0)]
    penalty_base: f64,
    /// Abandon a try after this many rounds without improvement
    #[arg(long, default_value_t = 6)]
    stagnant_rounds: u32,
    /// Optional wall-clock budget per search in milliseconds
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl EmbedParamsArgs {
    fn to_params(&self) -> Result<EmbedParams, AppError> {
        if self.penalty_base <= 1.0 {
            return Err(AppError::Usage("--penalty-base must be greater than 1".into()));
        }
        if self.tries == 0 || self.rounds == 0 {
            return Err(AppError::Usage("--tries and --rounds must be at least 1".into()));
        }
        Ok(EmbedParams {
            max_tries: self.tries,
            max_rounds: self.rounds,
            seed: self.seed,
            penalty_base: self.penalty_base,
            timeout_ms: self.timeout_ms,
            max_stagnant_rounds: self.stagnant_rounds,
        })
    }
}

#[derive(Args)]
struct EmbedArgs {
    /// Problem graph: an edge-list file or `clique:N`
    #[arg(long)]
    problem: String,
    /// Host graph edge-list file
    #[arg(long)]
    qpu: PathBuf,
    #[command(flatten)]
    params: EmbedParamsArgs,
    /// Output path for the embedding JSON; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MaxcliqueArgs {
    /// Host graph edge-list file
    #[arg(long)]
    qpu: PathBuf,
    /// Row label; host file stem when omitted
    #[arg(long)]
    label: Option<String>,
    /// Heuristic attempts per clique size
    #[arg(long, default_value_t = 3)]
    attempts: u32,
    #[command(flatten)]
    params: EmbedParamsArgs,
    /// Output path for the result JSON; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional output path for the witness embedding JSON
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Desk-scale grid (default): Zephyr m in [2,3] x t in {1,2,4},
    /// Havel-Hakimi deg in {5,30} x n in {50,400}
    #[arg(long, conflicts_with_all = ["full", "grid_file"])]
    desk: bool,
    /// The full 150 + 150 grid
    #[arg(long, conflicts_with = "grid_file")]
    full: bool,
    /// Custom grid: JSON-lines of configurations
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Heuristic attempts per clique size
    #[arg(long, default_value_t = 3)]
    attempts: u32,
    #[command(flatten)]
    params: EmbedParamsArgs,
    /// Worker pool size; QTOPO_WORKERS or available parallelism when omitted
    #[arg(long)]
    workers: Option<usize>,
    /// Results JSON-lines path
    #[arg(long, default_value = "results.jsonl")]
    out: PathBuf,
    /// Results CSV path; derived from --out when omitted
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Drop any existing checkpoint instead of resuming from it
    #[arg(long)]
    fresh: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKindArg {
    Fig2a,
    Fig2b,
    Summary,
}

#[derive(Args)]
struct ReportArgs {
    /// Results JSON-lines file produced by `sweep` or `maxclique`
    #[arg(long)]
    results: PathBuf,
    /// What to derive
    #[arg(long, value_enum)]
    kind: ReportKindArg,
    /// Output path
    #[arg(long)]
    out: PathBuf,
}

enum AppError {
    Usage(String),
    Data(String),
    Failures(String),
}

impl AppError {
    fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Usage(_) => ExitCode::from(1),
            AppError::Data(_) => ExitCode::from(2),
            AppError::Failures(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Data(m) | AppError::Failures(m) => m,
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> AppError {
    AppError::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Metrics(args) => metrics(args),
        Command::Embed(args) => embed(args),
        Command::Maxclique(args) => maxclique(args),
        Command::Sweep(args) => sweep(args),
        Command::Report(args) => run_report(args),
    }
}

fn generate(args: GenerateArgs) -> Result<(), AppError> {
    let graph = match args.family {
        FamilyArg::Zephyr => {
            let (Some(m), Some(t)) = (args.m, args.t) else {
                return Err(AppError::Usage("--family zephyr requires --m and --t".into()));
            };
            if args.deg.is_some() || args.n.is_some() {
                return Err(AppError::Usage("--deg/--n do not apply to zephyr".into()));
            }
            let params = ZephyrParams::new(m, t).map_err(|e| AppError::Usage(e.to_string()))?;
            qtopo::topology::zephyr_graph(params)
        }
        FamilyArg::Hh => {
            let (Some(deg), Some(n)) = (args.deg, args.n) else {
                return Err(AppError::Usage("--family hh requires --deg and --n".into()));
            };
            if args.m.is_some() || args.t.is_some() {
                return Err(AppError::Usage("--m/--t do not apply to hh".into()));
            }
            let params =
                HavelHakimiParams::new(deg, n).map_err(|e| AppError::Usage(e.to_string()))?;
            qtopo::topology::havel_hakimi_graph(params).map_err(data_err)?
        }
    };

    let mut body = Vec::new();
    write_edge_list(&graph, &mut body).map_err(data_err)?;
    if args.stats {
        let stats = serde_json::to_string(&topology_metrics(&graph)).expect("metrics serialize");
        body.extend_from_slice(stats.as_bytes());
        body.push(b'\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, body).map_err(data_err)?,
        None => std::io::stdout().write_all(&body).map_err(data_err)?,
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, AppError> {
    let file = File::open(path).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    read_edge_list(BufReader::new(file))
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))
}

fn metrics(args: MetricsArgs) -> Result<(), AppError> {
    let graph = read_graph(&args.input)?;
    let stats = topology_metrics(&graph);
    println!("{}", serde_json::to_string(&stats).expect("metrics serialize"));
    Ok(())
}

fn parse_problem(spec: &str) -> Result<Graph, AppError> {
    if let Some(count) = spec.strip_prefix("clique:") {
        let n: usize = count
            .parse()
            .map_err(|_| AppError::Usage(format!("bad clique size `{count}`")))?;
        if n == 0 {
            return Err(AppError::Usage("clique size must be at least 1".into()));
        }
        return Ok(Graph::complete(n));
    }
    read_graph(Path::new(spec))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).map_err(data_err)?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into())
}

fn embed(args: EmbedArgs) -> Result<(), AppError> {
    let problem = parse_problem(&args.problem)?;
    let host = read_graph(&args.qpu)?;
    let params = args.params.to_params()?;
    match find_embedding(&problem, &host, &params) {
        Ok(embedding) => {
            let embedding = embedding.with_label(file_stem(&args.qpu));
            let report = verify_embedding(&problem, &host, &embedding);
            if !report.is_valid() {
                return Err(AppError::Failures(format!(
                    "embedding failed verification: {report}"
                )));
            }
            write_or_print(&args.out, &embedding.to_json())
        }
        Err(failure) => Err(AppError::Failures(failure.to_string())),
    }
}

fn maxclique(args: MaxcliqueArgs) -> Result<(), AppError> {
    let host = read_graph(&args.qpu)?;
    if host.node_count() == 0 {
        return Err(AppError::Data("host graph has no nodes".into()));
    }
    if args.attempts == 0 {
        return Err(AppError::Usage("--attempts must be at least 1".into()));
    }
    let params = args.params.to_params()?;
    let label = args.label.unwrap_or_else(|| file_stem(&args.qpu));
    let row = evaluate_host(Family::Custom, &label, &host, &params, args.attempts);
    let result = row.result.as_ref().expect("host evaluation yields a result");
    write_or_print(&args.out, &serde_json::to_string(result).expect("result serializes"))?;
    if let Some(witness_out) = &args.witness_out {
        let witness = row.witness.as_ref().expect("host evaluation yields a witness");
        std::fs::write(witness_out, format!("{}\n", witness.to_json())).map_err(data_err)?;
    }
    Ok(())
}

fn parse_grid_file(path: &Path) -> Result<Vec<QpuConfig>, AppError> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    let mut configs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let config: QpuConfig = serde_json::from_str(line).map_err(|e| {
            AppError::Data(format!("{} line {}: {e}", path.display(), i + 1))
        })?;
        configs.push(config);
    }
    if configs.is_empty() {
        return Err(AppError::Data(format!("{}: no configurations", path.display())));
    }
    Ok(configs)
}

fn default_workers() -> usize {
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        if let Ok(parsed) = value.parse::<usize>() {
            if parsed >= 1 {
                return parsed;
            }
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn sweep(args: SweepArgs) -> Result<(), AppError> {
    let configs = if args.full {
        sweep_configs()
    } else if let Some(grid) = &args.grid_file {
        parse_grid_file(grid)?
    } else {
        desk_configs()
    };
    if args.attempts == 0 {
        return Err(AppError::Usage("--attempts must be at least 1".into()));
    }
    let workers = match args.workers {
        Some(0) => return Err(AppError::Usage("--workers must be at least 1".into())),
        Some(w) => w,
        None => default_workers(),
    };

    let checkpoint = CheckpointPaths::for_output(&args.out);
    if args.fresh {
        checkpoint.clear().map_err(data_err)?;
    }
    let runner = SweepRunner {
        embed_params: args.params.to_params()?,
        attempts_per_n: args.attempts,
        workers,
        checkpoint: Some(checkpoint.clone()),
    };
    let rows = run_sweep(&configs, &runner).map_err(data_err)?;

    let mut jsonl = Vec::new();
    write_results_jsonl(&rows, &mut jsonl).map_err(data_err)?;
    std::fs::write(&args.out, jsonl).map_err(data_err)?;
    let csv_path = args
        .csv
        .clone()
        .unwrap_or_else(|| args.out.with_extension("csv"));
    let mut csv = Vec::new();
    write_results_csv(&rows, &mut csv).map_err(data_err)?;
    std::fs::write(&csv_path, csv).map_err(data_err)?;
    checkpoint.clear().map_err(data_err)?;

    let failed: Vec<&SweepRow> = rows.iter().filter(|r| r.is_failed()).collect();
    eprintln!(
        "sweep: {} rows ({} failed) -> {} / {}",
        rows.len(),
        failed.len(),
        args.out.display(),
        csv_path.display()
    );
    if !failed.is_empty() {
        let labels: Vec<&str> = failed.iter().map(|r| r.label.as_str()).collect();
        return Err(AppError::Failures(format!(
            "{} sweep row(s) failed: {}",
            failed.len(),
            labels.join(", ")
        )));
    }
    Ok(())
}

fn run_report(args: ReportArgs) -> Result<(), AppError> {
    let kind = match args.kind {
        ReportKindArg::Fig2a => ReportKind::Fig2a,
        ReportKindArg::Fig2b => ReportKind::Fig2b,
        ReportKindArg::Summary => ReportKind::Summary,
    };
    let verdict = report(&args.results, &args.out, kind).map_err(data_err)?;
    if let Some(verdict) = verdict {
        println!("{verdict}");
    }
    Ok(())
}
