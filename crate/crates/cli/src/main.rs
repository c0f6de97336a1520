//! `lppart`: balanced graph partitioning from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 the run finished but the result
//! violates the balance bound, 3 I/O or parse failure.

mod bench;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lppart::dist::run_pes;
use lppart::graph::{compute_lmax, evaluate, Fraction};
use lppart::io::{self, IoError};
use lppart::pipeline::{partition, partition_sequential, Config, PipelineError, Preset, RunReport};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "lppart", version, about = "Multilevel graph partitioner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a METIS graph file
    Partition(PartitionArgs),
    /// Generate benchmark graphs
    #[command(subcommand)]
    Gen(GenCommand),
    /// Evaluate a partition file against a graph
    Eval(EvalArgs),
    /// Run a benchmark suite described by a TOML file
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Input graph in METIS format
    graph: PathBuf,
    /// Number of blocks
    #[arg(long)]
    k: usize,
    /// Balance slack, e.g. 0.03 or 3/100
    #[arg(long, default_value = "0.03", value_parser = parse_fraction)]
    epsilon: Fraction,
    /// fast, eco or minimal
    #[arg(long, default_value = "fast")]
    preset: String,
    /// Defaults to LPPART_SEED, or 0 when unset
    #[arg(long)]
    seed: Option<u64>,
    /// Simulated worker count
    #[arg(long, default_value_t = 1)]
    procs: usize,
    /// Write the partition here, one block ID per line
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a JSON run report here
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random geometric graph with 2^x nodes
    Rgg {
        /// Node count exponent, at least 4
        #[arg(long)]
        x: u32,
        /// Defaults to LPPART_SEED, or 0 when unset
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Planted-partition graph
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: usize,
        /// Intra-block edge probability
        #[arg(long)]
        p_in: f64,
        /// Cross-block edge probability
        #[arg(long)]
        p_out: f64,
        /// Defaults to LPPART_SEED, or 0 when unset
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the planted membership as a partition file
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// Input graph in METIS format
    graph: PathBuf,
    /// Partition file, one block ID per line
    partition: PathBuf,
    /// Number of blocks
    #[arg(long)]
    k: usize,
    /// Balance slack used for the feasibility verdict
    #[arg(long, default_value = "0.03", value_parser = parse_fraction)]
    epsilon: Fraction,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    /// I/O or parse failure in a named file.
    File { path: String, err: IoError },
    Pipeline(PipelineError),
    /// Malformed bench suite description.
    Suite(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Pipeline(PipelineError::Config(_)) => EXIT_USAGE,
            CliError::File { .. } | CliError::Pipeline(_) | CliError::Suite(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Suite(msg) => write!(f, "{msg}"),
            CliError::File { path, err } => write!(f, "{path}: {err}"),
            CliError::Pipeline(err) => write!(f, "{err}"),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> CliError {
        CliError::Pipeline(err)
    }
}

/// Pins a file's path to whatever went wrong inside it.
fn in_file<T, E: Into<IoError>>(path: &Path, result: Result<T, E>) -> Result<T, CliError> {
    result.map_err(|err| CliError::File {
        path: path.display().to_string(),
        err: err.into(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let ok = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE) };
        }
    };
    match run(cli) {
        Ok(feasible) => {
            if feasible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INFEASIBLE)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Ok(false) means the command completed but its result is infeasible.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Partition(args) => run_partition(args),
        Command::Gen(cmd) => run_gen(cmd).map(|()| true),
        Command::Eval(args) => run_eval(args),
        Command::Bench(args) => bench::run(args).map(|()| true),
    }
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    Fraction::parse(s).ok_or_else(|| format!("not a non-negative fraction: {s:?}"))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("LPPART_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!("LPPART_SEED must be an unsigned integer, found {text:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(err) => Err(CliError::Usage(format!("LPPART_SEED unreadable: {err}"))),
    }
}

fn run_partition(args: PartitionArgs) -> Result<bool, CliError> {
    let preset: Preset = args.preset.parse().map_err(CliError::Usage)?;
    let seed = resolve_seed(args.seed)?;
    if args.procs == 0 {
        return Err(CliError::Usage("--procs must be at least 1".into()));
    }
    let g = in_file(&args.graph, io::read_metis(&args.graph))?;
    let mut cfg = Config::preset(preset, args.k);
    cfg.epsilon = args.epsilon;
    cfg.seed = seed;
    cfg.procs = args.procs;
    let report = if args.procs == 1 {
        partition_sequential(&g, &cfg)?
    } else {
        run_pes(args.procs, |_, tp| partition(&g, &cfg, tp)).swap_remove(0)?
    };

    println!("cut={}", report.cut);
    println!("max_block_weight={}", report.max_block_weight);
    println!("imbalance={}", report.imbalance);
    println!("feasible={}", report.feasible);
    if let Some(path) = &args.out {
        in_file(path, io::write_partition(&report.labels, path))?;
    }
    if let Some(path) = &args.report {
        in_file(path, std::fs::write(path, render_report(&args, seed, &report)).map_err(IoError::Io))?;
    }
    Ok(report.feasible)
}

fn render_report(args: &PartitionArgs, seed: u64, report: &RunReport) -> String {
    let vcycles: Vec<serde_json::Value> = report
        .vcycles
        .iter()
        .map(|c| {
            serde_json::json!({
                "levels": c.coarsen.len(),
                "coarsest_n": c.coarsest_n,
                "evo_generations": c.evo_generations,
                "evo_combines": c.evo_combines,
                "cut_after": c.cut_after,
            })
        })
        .collect();
    let json = serde_json::json!({
        "graph": args.graph.display().to_string(),
        "k": args.k,
        "epsilon": args.epsilon.to_string(),
        "preset": args.preset,
        "seed": seed,
        "procs": args.procs,
        "cut": report.cut,
        "max_block_weight": report.max_block_weight,
        "imbalance": report.imbalance,
        "feasible": report.feasible,
        "block_weights": report.block_weights,
        "vcycles": vcycles,
        "times": {
            "coarsen_s": report.times.coarsen_s,
            "evo_s": report.times.evo_s,
            "refine_s": report.times.refine_s,
            "total_s": report.times.total_s,
        },
    });
    let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
    text.push('\n');
    text
}

fn run_gen(cmd: GenCommand) -> Result<(), CliError> {
    match cmd {
        GenCommand::Rgg { x, seed, out } => {
            if x < 4 {
                return Err(CliError::Usage("--x must be at least 4".into()));
            }
            let g = io::gen_rgg(x, resolve_seed(seed)?);
            in_file(&out, io::write_metis(&g, &out))?;
            println!("n={}", g.n());
            println!("m={}", g.m());
            println!("out={}", out.display());
        }
        GenCommand::Planted {
            n,
            blocks,
            p_in,
            p_out,
            seed,
            out,
            labels_out,
        } => {
            if blocks == 0 {
                return Err(CliError::Usage("--blocks must be at least 1".into()));
            }
            for (name, p) in [("--p-in", p_in), ("--p-out", p_out)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::Usage(format!("{name} must lie in [0, 1], found {p}")));
                }
            }
            let g = io::gen_planted(n, blocks, p_in, p_out, resolve_seed(seed)?);
            in_file(&out, io::write_metis(&g, &out))?;
            if let Some(path) = &labels_out {
                in_file(path, io::write_partition(&io::planted_labels(n, blocks), path))?;
            }
            println!("n={}", g.n());
            println!("m={}", g.m());
            println!("out={}", out.display());
        }
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<bool, CliError> {
    let g = in_file(&args.graph, io::read_metis(&args.graph))?;
    let labels = in_file(&args.partition, io::read_partition(&args.partition))?;
    let metrics = in_file(&args.partition, evaluate(&g, &labels, args.k).map_err(IoError::Graph))?;
    let bound = in_file(&args.graph, compute_lmax(g.total_node_weight(), args.k, args.epsilon).map_err(IoError::Graph))?;
    let feasible = metrics.feasible(&bound);
    println!("cut={}", metrics.cut);
    println!("max_block_weight={}", metrics.max_block_weight);
    println!("imbalance={}", metrics.imbalance);
    println!("feasible={feasible}");
    Ok(feasible)
}
