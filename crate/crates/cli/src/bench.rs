//! Benchmark harness: run the partitioner over a suite of instances and
//! report cut and wall time, arithmetic mean per instance and geometric mean
//! across instances.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use lppart::dist::run_pes;
use lppart::graph::{Fraction, Graph};
use lppart::io::{self, IoError};
use lppart::pipeline::{partition, partition_sequential, Config, Preset};
use serde::Deserialize;

use crate::{in_file, resolve_seed, CliError};

#[derive(Args)]
pub struct BenchArgs {
    /// Suite description (TOML)
    config: PathBuf,
    /// Also write the table here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct Suite {
    /// Runs per instance; repetition r uses seed base + r.
    #[serde(default = "default_repetitions")]
    repetitions: u32,
    /// Base seed; LPPART_SEED or 0 when absent.
    seed: Option<u64>,
    #[serde(rename = "instance")]
    instances: Vec<Instance>,
}

fn default_repetitions() -> u32 {
    10
}

#[derive(Deserialize)]
struct Instance {
    name: String,
    #[serde(flatten)]
    source: Source,
    k: usize,
    #[serde(default = "default_preset")]
    preset: String,
    epsilon: Option<String>,
    #[serde(default = "default_procs")]
    procs: usize,
}

fn default_preset() -> String {
    "fast".into()
}

fn default_procs() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Source {
    Rgg {
        x: u32,
        #[serde(default)]
        gen_seed: u64,
    },
    Planted {
        n: usize,
        blocks: usize,
        p_in: f64,
        p_out: f64,
        #[serde(default)]
        gen_seed: u64,
    },
    File {
        path: PathBuf,
    },
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let text = in_file(&args.config, fs::read_to_string(&args.config).map_err(IoError::Io))?;
    let suite: Suite = toml::from_str(&text)
        .map_err(|err| CliError::Suite(format!("{}: {err}", args.config.display())))?;
    if suite.instances.is_empty() {
        return Err(CliError::Suite("suite has no [[instance]] tables".into()));
    }
    let base_seed = match suite.seed {
        Some(seed) => seed,
        None => resolve_seed(None)?,
    };

    let mut table = String::new();
    let mut ln_cut_sum = 0f64;
    let mut ln_time_sum = 0f64;
    for inst in &suite.instances {
        let g = load(inst)?;
        let preset: Preset = inst.preset.parse().map_err(CliError::Usage)?;
        let mut cfg = Config::preset(preset, inst.k);
        if let Some(text) = &inst.epsilon {
            cfg.epsilon = Fraction::parse(text)
                .ok_or_else(|| CliError::Suite(format!("bad epsilon {text:?}")))?;
        }
        if inst.procs == 0 {
            return Err(CliError::Suite(format!("instance {}: procs must be at least 1", inst.name)));
        }
        cfg.procs = inst.procs;

        let mut cuts: Vec<u64> = Vec::new();
        let mut time_sum = 0f64;
        let mut feasible = 0u32;
        for rep in 0..suite.repetitions {
            cfg.seed = base_seed + rep as u64;
            let start = Instant::now();
            let report = if inst.procs == 1 {
                partition_sequential(&g, &cfg)?
            } else {
                run_pes(inst.procs, |_, tp| partition(&g, &cfg, tp)).swap_remove(0)?
            };
            time_sum += start.elapsed().as_secs_f64();
            cuts.push(report.cut);
            feasible += u32::from(report.feasible);
        }
        let avg_cut = cuts.iter().sum::<u64>() as f64 / cuts.len() as f64;
        let best_cut = *cuts.iter().min().expect("at least one repetition");
        let avg_time = time_sum / cuts.len() as f64;
        writeln!(
            table,
            "instance={} n={} m={} k={} reps={} avg_cut={avg_cut:.3} best_cut={best_cut} avg_time_s={avg_time:.6} feasible={feasible}/{}",
            inst.name,
            g.n(),
            g.m(),
            inst.k,
            suite.repetitions,
            suite.repetitions,
        )
        .unwrap();
        // Zero cuts would zero the whole geometric mean; clamp to 1.
        ln_cut_sum += avg_cut.max(1.0).ln();
        ln_time_sum += avg_time.max(1e-9).ln();
    }
    let count = suite.instances.len() as f64;
    writeln!(
        table,
        "geomean_avg_cut={:.3} geomean_time_s={:.6}",
        (ln_cut_sum / count).exp(),
        (ln_time_sum / count).exp(),
    )
    .unwrap();

    print!("{table}");
    if let Some(path) = &args.out {
        in_file(path, fs::write(path, &table).map_err(IoError::Io))?;
    }
    Ok(())
}

fn load(inst: &Instance) -> Result<Graph, CliError> {
    match &inst.source {
        Source::Rgg { x, gen_seed } => {
            if *x < 4 {
                return Err(CliError::Suite(format!("instance {}: x must be at least 4", inst.name)));
            }
            Ok(io::gen_rgg(*x, *gen_seed))
        }
        Source::Planted {
            n,
            blocks,
            p_in,
            p_out,
            gen_seed,
        } => {
            if *blocks == 0 {
                return Err(CliError::Suite(format!("instance {}: blocks must be at least 1", inst.name)));
            }
            for (name, p) in [("p_in", *p_in), ("p_out", *p_out)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::Suite(format!(
                        "instance {}: {name} must lie in [0, 1], found {p}",
                        inst.name
                    )));
                }
            }
            Ok(io::gen_planted(*n, *blocks, *p_in, *p_out, *gen_seed))
        }
        Source::File { path } => in_file(path, io::read_metis(path)),
    }
}
