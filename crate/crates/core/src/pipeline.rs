//! End-to-end partitioner: parallel cluster coarsening down to a size
//! threshold, evolutionary partitioning of the gathered coarsest graph,
//! refinement on the way back up, and repeated V-cycles whose coarsening
//! never contracts a cut edge of the partition being improved.
//!
//! `partition` drives the distributed machinery through a `Transport`;
//! `partition_sequential` is an independent single-process implementation
//! of the same schedule, kept in lockstep by construction (shared seed
//! derivations, same stall rule, same stage order) so the two can be
//! compared label for label at P = 1.

use crate::coarsen::{contract, CoarseMapping};
use crate::dist::{
    distribute, gather_coarsest, parallel_contract, parallel_lp, parallel_project,
    AllreduceBlockWeights, DistError, DistGraph, DistLpOptions, LocalClusterWeights, Transport,
};
use crate::evo::{evolve, EvoBudget, EvoParams};
use crate::graph::{compute_lmax, evaluate, Fraction, Graph, GraphError, Labels, WeightBound};
use crate::lp::{run_lp, LpMode, LpPolicy, OrderingKind, VecBlockWeights};
use crate::rng::{mix, SplitMix64};
use crate::{BlockId, NodeId, Weight};
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Chooses the default cluster-size divisor f: social graphs coarsen with
/// many small clusters, mesh-like graphs with very few large ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphType {
    Social,
    Mesh,
}

impl GraphType {
    pub fn default_cluster_factor(self) -> u64 {
        match self {
            GraphType::Social => 14,
            GraphType::Mesh => 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fast,
    Eco,
    Minimal,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Preset, String> {
        match s {
            "fast" => Ok(Preset::Fast),
            "eco" => Ok(Preset::Eco),
            "minimal" => Ok(Preset::Minimal),
            other => Err(format!("unknown preset '{other}'")),
        }
    }
}

/// Evolutionary budget for the whole run; it is split evenly across
/// V-cycles, and `ScaledSeconds(t1)` becomes t1/P wall seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetSpec {
    InitialOnly,
    Generations(u32),
    Seconds(f64),
    ScaledSeconds(f64),
}

impl BudgetSpec {
    fn per_cycle(self, p: usize, vcycles: u32) -> EvoBudget {
        let cycles = vcycles.max(1);
        match self {
            BudgetSpec::InitialOnly => EvoBudget::InitialOnly,
            BudgetSpec::Generations(g) => EvoBudget::Generations((g / cycles).max(1)),
            BudgetSpec::Seconds(s) => EvoBudget::Seconds(s / cycles as f64),
            BudgetSpec::ScaledSeconds(t1) => EvoBudget::Seconds(t1 / p as f64 / cycles as f64),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub k: usize,
    pub epsilon: Fraction,
    pub seed: u64,
    /// Worker count the caller intends to run with; informational here,
    /// the actual count always comes from the transport.
    pub procs: usize,
    /// Propagation rounds per coarsening level.
    pub lp_iters_coarsen: u32,
    /// Propagation rounds per refinement level.
    pub lp_iters_refine: u32,
    pub vcycles: u32,
    /// Cluster-size divisor f for the first V-cycle; later cycles draw
    /// f uniformly from [10, 25].
    pub cluster_factor: u64,
    pub graph_type: GraphType,
    /// Coarsening stops at 10000*k nodes unless overridden.
    pub coarsest_threshold: Option<usize>,
    pub evo_budget: BudgetSpec,
}

impl Config {
    /// Fast-preset defaults for social-style inputs.
    pub fn new(k: usize) -> Config {
        Config::preset(Preset::Fast, k)
    }

    pub fn preset(preset: Preset, k: usize) -> Config {
        let (vcycles, evo_budget) = match preset {
            Preset::Fast => (2, BudgetSpec::InitialOnly),
            Preset::Eco => (5, BudgetSpec::ScaledSeconds(10.0)),
            Preset::Minimal => (1, BudgetSpec::InitialOnly),
        };
        Config {
            k,
            epsilon: Fraction::new(3, 100).unwrap(),
            seed: 0,
            procs: 1,
            lp_iters_coarsen: 3,
            lp_iters_refine: 6,
            vcycles,
            cluster_factor: GraphType::Social.default_cluster_factor(),
            graph_type: GraphType::Social,
            coarsest_threshold: None,
            evo_budget: evo_budget,
        }
    }

    pub fn threshold(&self) -> usize {
        self.coarsest_threshold.unwrap_or(10_000 * self.k)
    }

    fn validate(&self) -> Result<(), PipelineError> {
        if self.k < 1 {
            return Err(PipelineError::Config("k must be at least 1".into()));
        }
        if self.lp_iters_coarsen < 1 {
            return Err(PipelineError::Config("need at least one coarsening round".into()));
        }
        if self.cluster_factor < 1 {
            return Err(PipelineError::Config("cluster factor must be at least 1".into()));
        }
        if self.vcycles < 1 {
            return Err(PipelineError::Config("need at least one V-cycle".into()));
        }
        Ok(())
    }
}

/// One coarsening level as seen by the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub n: usize,
    pub m: usize,
    pub rounds: u32,
    pub moves: u64,
    /// Label-update records sent across PEs, summed globally.
    pub records: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineStats {
    pub n: usize,
    pub rounds: u32,
    pub moves: u64,
    pub records: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VcycleStats {
    pub coarsen: Vec<LevelStats>,
    pub coarsest_n: usize,
    pub evo_generations: u32,
    pub evo_combines: u64,
    pub refine: Vec<RefineStats>,
    /// Cut after this cycle's output guard.
    pub cut_after: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageTimes {
    pub coarsen_s: f64,
    pub evo_s: f64,
    pub refine_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub labels: Labels,
    pub cut: Weight,
    pub block_weights: Vec<Weight>,
    pub max_block_weight: Weight,
    pub imbalance: f64,
    pub feasible: bool,
    pub vcycles: Vec<VcycleStats>,
    pub times: StageTimes,
}

// Stage tags folded into every derived seed; both implementations use
// exactly these, which is what keeps P=1 label-identical to sequential.
const SEED_F: u64 = 0x6663;
const SEED_COARSEN: u64 = 0x636f_6172;
const SEED_EVO: u64 = 0x65766f_6c;
const SEED_REFINE: u64 = 0x7265_6669;
const SEED_BALANCE: u64 = 0x62616c;

fn coarsen_seed(seed: u64, cycle: u64, level: u64) -> u64 {
    mix(&[seed, cycle, level, SEED_COARSEN])
}

fn evo_seed(seed: u64, cycle: u64) -> u64 {
    mix(&[seed, cycle, SEED_EVO])
}

fn refine_seed(seed: u64, cycle: u64, level: u64) -> u64 {
    mix(&[seed, cycle, level, SEED_REFINE])
}

fn balance_seed(seed: u64, attempt: u64) -> u64 {
    mix(&[seed, attempt, SEED_BALANCE])
}

fn evo_params(cfg: &Config, lmax: &WeightBound, f: u64) -> EvoParams {
    let mut p = EvoParams::new(cfg.k, lmax.clone());
    p.rounds_coarsen = cfg.lp_iters_coarsen;
    p.rounds_refine = cfg.lp_iters_refine;
    p.cluster_factor = f;
    p
}

/// Ratio test of the early-stop rule: a level that keeps more than 95% of
/// the nodes makes no real progress.
fn stalled(n_coarse: usize, n_fine: usize) -> bool {
    20 * n_coarse > 19 * n_fine
}

struct CycleOutcome {
    labels: Labels,
    stats: VcycleStats,
    times: StageTimes,
}

/// One multilevel pass on the distributed graph. `input` restricts the
/// clustering so none of its cut edges is contracted and seeds the
/// population at the coarsest level; the cut guard against it lives in
/// the caller.
fn run_cycle_dist(
    g: &Graph,
    cfg: &Config,
    lmax: &WeightBound,
    f: u64,
    budget: EvoBudget,
    input: Option<&Labels>,
    cycle: u64,
    tp: &mut impl Transport,
) -> Result<CycleOutcome, PipelineError> {
    let p = tp.num_pes();
    let threshold = cfg.threshold();
    let mut cur = distribute(g, p)?.swap_remove(tp.pe());
    let mut carry: Option<Vec<BlockId>> = input.map(|l| {
        (0..cur.n_local())
            .map(|v| l.get(cur.global_of_local(v)))
            .collect()
    });
    let mut stack: Vec<(DistGraph, Vec<NodeId>, u64)> = Vec::new();
    let mut coarsen_stats = Vec::new();
    let mut times = StageTimes::default();
    let t0 = Instant::now();

    let mut stalls = 0u32;
    let mut level = 0u64;
    while cur.n_global() > threshold && stalls < 2 {
        let local_max = (0..cur.n_owned()).map(|v| cur.node_weight(v)).max().unwrap_or(0);
        let global_max = tp
            .gather_all(local_max.to_le_bytes().to_vec())
            .into_iter()
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
            .max()
            .unwrap();
        let bound = global_max.max(lmax.divided_floor(f)).max(1);
        cur.reset_labels_to_singletons();
        let mut view = LocalClusterWeights::new(&cur);
        let opts = DistLpOptions {
            policy: LpPolicy::Cluster { bound },
            restriction: carry.as_deref(),
            rounds: cfg.lp_iters_coarsen,
            ordering: OrderingKind::DegreeIncreasing,
            seed: coarsen_seed(cfg.seed, cycle, level),
            stop_on_quiescence: true,
            trace: false,
        };
        let rows: u64 = (0..cur.n_owned()).map(|v| cur.degree(v) as u64).sum();
        let st = parallel_lp(&mut cur, &mut view, &opts, tp);
        let records_local: u64 = st.phases.iter().map(|ph| ph.records_sent).sum();
        let sums = tp.allreduce_sum(&[rows, records_local]);
        let dc = parallel_contract(&cur, carry.as_deref(), tp);
        coarsen_stats.push(LevelStats {
            n: cur.n_global(),
            m: (sums[0] / 2) as usize,
            rounds: st.rounds_run(),
            moves: st.total_moves_global,
            records: sums[1],
        });
        if stalled(dc.n_coarse, cur.n_global()) {
            stalls += 1;
        } else {
            stalls = 0;
        }
        carry = dc.carry;
        stack.push((std::mem::replace(&mut cur, dc.graph), dc.c_local, level));
        level += 1;
    }
    times.coarsen_s = t0.elapsed().as_secs_f64();

    // Coarsest stage: replicate the graph, seed the carried-down input
    // partition (lossless because clusters never straddle its blocks),
    // evolve, and write the winner back onto the distributed graph.
    let t1 = Instant::now();
    let gc = gather_coarsest(&cur, tp);
    let seeded: Option<Labels> = carry.as_ref().map(|c| {
        let owned = &c[..cur.n_owned()];
        let mut bytes = Vec::with_capacity(8 * owned.len());
        for &b in owned {
            bytes.extend_from_slice(&(b as u64).to_le_bytes());
        }
        let mut all = Vec::with_capacity(gc.n());
        for part in tp.gather_all(bytes) {
            for ch in part.chunks_exact(8) {
                all.push(u64::from_le_bytes(ch.try_into().unwrap()) as usize);
            }
        }
        Labels::from_vec(all)
    });
    let params = evo_params(cfg, lmax, f);
    let (best, evo_stats) = evolve(&gc, &params, budget, evo_seed(cfg.seed, cycle), seeded.as_ref(), tp);
    for v in 0..cur.n_owned() {
        cur.set_label(v, best.labels.get(cur.global_of_local(v)));
    }
    cur.refresh_ghost_labels(tp);
    times.evo_s = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let mut refine_stats = Vec::new();
    while let Some((mut finer, c_local, lvl)) = stack.pop() {
        parallel_project(&mut finer, &c_local, &cur, tp);
        let mut view = AllreduceBlockWeights::new(&finer, cfg.k, lmax.floor_weight(), tp);
        let opts = DistLpOptions {
            policy: LpPolicy::Refine {
                bound: lmax.floor_weight(),
            },
            restriction: None,
            rounds: cfg.lp_iters_refine,
            ordering: OrderingKind::Random,
            seed: refine_seed(cfg.seed, cycle, lvl),
            stop_on_quiescence: true,
            trace: false,
        };
        let st = parallel_lp(&mut finer, &mut view, &opts, tp);
        let records_local: u64 = st.phases.iter().map(|ph| ph.records_sent).sum();
        let records = tp.allreduce_sum(&[records_local])[0];
        refine_stats.push(RefineStats {
            n: finer.n_global(),
            rounds: st.rounds_run(),
            moves: st.total_moves_global,
            records,
        });
        cur = finer;
    }
    let labels = gather_labels(&cur, tp);
    times.refine_s = t2.elapsed().as_secs_f64();
    times.total_s = t0.elapsed().as_secs_f64();

    Ok(CycleOutcome {
        labels,
        stats: VcycleStats {
            coarsen: coarsen_stats,
            coarsest_n: gc.n(),
            evo_generations: evo_stats.generations,
            evo_combines: evo_stats.combines,
            refine: refine_stats,
            cut_after: 0,
        },
        times,
    })
}

/// Replicates the full label vector: owned slices concatenate in PE
/// order, which is exactly ascending global order.
fn gather_labels(d: &DistGraph, tp: &mut impl Transport) -> Labels {
    let mut bytes = Vec::with_capacity(8 * d.n_owned());
    for v in 0..d.n_owned() {
        bytes.extend_from_slice(&(d.label(v) as u64).to_le_bytes());
    }
    let mut all = Vec::with_capacity(d.n_global());
    for part in tp.gather_all(bytes) {
        for ch in part.chunks_exact(8) {
            all.push(u64::from_le_bytes(ch.try_into().unwrap()) as usize);
        }
    }
    Labels::from_vec(all)
}

/// Sequential twin of `run_cycle_dist`: same stages, same seeds, same
/// stall rule, built on the single-process engine.
fn run_cycle_seq(
    g: &Graph,
    cfg: &Config,
    lmax: &WeightBound,
    f: u64,
    budget: EvoBudget,
    input: Option<&Labels>,
    cycle: u64,
) -> CycleOutcome {
    let threshold = cfg.threshold();
    let mut cur = g.clone();
    let mut carry: Option<Vec<BlockId>> = input.map(|l| l.as_slice().to_vec());
    let mut stack: Vec<(Graph, CoarseMapping, u64)> = Vec::new();
    let mut coarsen_stats = Vec::new();
    let mut times = StageTimes::default();
    let t0 = Instant::now();

    let mut stalls = 0u32;
    let mut level = 0u64;
    while cur.n() > threshold && stalls < 2 {
        let bound = cur.max_node_weight().max(lmax.divided_floor(f)).max(1);
        let mut clustering = Labels::identity(cur.n());
        let mut weights = VecBlockWeights::singletons(&cur);
        let mode = LpMode {
            policy: LpPolicy::Cluster { bound },
            restriction: carry.as_deref(),
            rounds: cfg.lp_iters_coarsen,
            ordering: OrderingKind::DegreeIncreasing,
        };
        let st = run_lp(
            &cur,
            &mut clustering,
            &mode,
            &mut weights,
            coarsen_seed(cfg.seed, cycle, level),
        );
        let (coarse, mapping) = contract(&cur, &clustering);
        coarsen_stats.push(LevelStats {
            n: cur.n(),
            m: cur.m(),
            rounds: st.rounds_run(),
            moves: st.total_moves,
            records: 0,
        });
        if stalled(coarse.n(), cur.n()) {
            stalls += 1;
        } else {
            stalls = 0;
        }
        carry = carry.map(|r| {
            let mut cr = vec![0; coarse.n()];
            for v in 0..cur.n() {
                cr[mapping.coarse_of(v)] = r[v];
            }
            cr
        });
        stack.push((std::mem::replace(&mut cur, coarse), mapping, level));
        level += 1;
    }
    times.coarsen_s = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let seeded = carry.as_ref().map(|c| Labels::from_vec(c.clone()));
    let params = evo_params(cfg, lmax, f);
    let mut solo = crate::dist::LocalTransport::solo();
    let (best, evo_stats) = evolve(
        &cur,
        &params,
        budget,
        evo_seed(cfg.seed, cycle),
        seeded.as_ref(),
        &mut solo,
    );
    let coarsest_n = cur.n();
    let mut labels = best.labels;
    times.evo_s = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let mut refine_stats = Vec::new();
    while let Some((finer, mapping, lvl)) = stack.pop() {
        labels = mapping.project(&labels);
        cur = finer;
        let mut weights = VecBlockWeights::of_partition(&cur, &labels, cfg.k);
        let mode = LpMode {
            policy: LpPolicy::Refine {
                bound: lmax.floor_weight(),
            },
            restriction: None,
            rounds: cfg.lp_iters_refine,
            ordering: OrderingKind::Random,
        };
        let st = run_lp(&cur, &mut labels, &mode, &mut weights, refine_seed(cfg.seed, cycle, lvl));
        refine_stats.push(RefineStats {
            n: cur.n(),
            rounds: st.rounds_run(),
            moves: st.total_moves,
            records: 0,
        });
    }
    times.refine_s = t2.elapsed().as_secs_f64();
    times.total_s = t0.elapsed().as_secs_f64();

    CycleOutcome {
        labels,
        stats: VcycleStats {
            coarsen: coarsen_stats,
            coarsest_n,
            evo_generations: evo_stats.generations,
            evo_combines: evo_stats.combines,
            refine: refine_stats,
            cut_after: 0,
        },
        times,
    }
}

/// One restricted V-cycle over `labels_in`. The output never cuts more
/// than the input: the input partition is seeded into every population
/// and a final guard returns it unchanged if refinement drifted.
pub fn vcycle(
    g: &Graph,
    labels_in: &Labels,
    cfg: &Config,
    tp: &mut impl Transport,
) -> Result<(Labels, VcycleStats), PipelineError> {
    cfg.validate()?;
    let lmax = compute_lmax(g.total_node_weight(), cfg.k, cfg.epsilon)?;
    let budget = cfg.evo_budget.per_cycle(tp.num_pes(), cfg.vcycles);
    let mut out = run_cycle_dist(g, cfg, &lmax, cfg.cluster_factor, budget, Some(labels_in), 0, tp)?;
    let before = evaluate(g, labels_in, cfg.k)?;
    let after = evaluate(g, &out.labels, cfg.k)?;
    let keep_input = rank_of(&after, &lmax) > rank_of(&before, &lmax);
    if keep_input {
        out.labels = labels_in.clone();
        out.stats.cut_after = before.cut;
    } else {
        out.stats.cut_after = after.cut;
    }
    Ok((out.labels, out.stats))
}

/// Comparison key for the cycle guard: feasibility outranks cut.
fn rank_of(m: &crate::graph::PartitionMetrics, lmax: &WeightBound) -> (bool, Weight) {
    (!m.feasible(lmax), m.cut)
}

pub fn partition(
    g: &Graph,
    cfg: &Config,
    tp: &mut impl Transport,
) -> Result<RunReport, PipelineError> {
    run_pipeline(g, cfg, &mut Some(tp))
}

pub fn partition_sequential(g: &Graph, cfg: &Config) -> Result<RunReport, PipelineError> {
    run_pipeline::<crate::dist::LocalTransport>(g, cfg, &mut None)
}

/// Shared schedule. `tp = None` selects the sequential engine; both
/// branches derive the same seeds in the same order.
fn run_pipeline<T: Transport>(
    g: &Graph,
    cfg: &Config,
    tp: &mut Option<&mut T>,
) -> Result<RunReport, PipelineError> {
    cfg.validate()?;
    let total = Instant::now();
    let lmax = compute_lmax(g.total_node_weight(), cfg.k, cfg.epsilon)?;
    if cfg.k == 1 {
        let labels = Labels::constant(g.n(), 0);
        let m = evaluate(g, &labels, 1)?;
        return Ok(RunReport {
            feasible: m.feasible(&lmax),
            cut: m.cut,
            block_weights: m.block_weights,
            max_block_weight: m.max_block_weight,
            imbalance: m.imbalance,
            labels,
            vcycles: Vec::new(),
            times: StageTimes {
                total_s: total.elapsed().as_secs_f64(),
                ..StageTimes::default()
            },
        });
    }
    let p = tp.as_ref().map_or(1, |t| t.num_pes());
    let budget = cfg.evo_budget.per_cycle(p, cfg.vcycles);
    let mut f_rng = SplitMix64::new(mix(&[cfg.seed, SEED_F]));
    let mut labels: Option<(Labels, crate::graph::PartitionMetrics)> = None;
    let mut vstats = Vec::new();
    let mut times = StageTimes::default();
    for cycle in 0..cfg.vcycles {
        let f = if cycle == 0 {
            cfg.cluster_factor
        } else {
            f_rng.next_range(10, 25)
        };
        let input = labels.as_ref().map(|(l, _)| l);
        let mut out = match tp {
            Some(t) => run_cycle_dist(g, cfg, &lmax, f, budget, input, cycle as u64, *t)?,
            None => run_cycle_seq(g, cfg, &lmax, f, budget, input, cycle as u64),
        };
        let after = evaluate(g, &out.labels, cfg.k)?;
        times.coarsen_s += out.times.coarsen_s;
        times.evo_s += out.times.evo_s;
        times.refine_s += out.times.refine_s;
        match labels.take() {
            Some((prev, prev_m)) if rank_of(&after, &lmax) > rank_of(&prev_m, &lmax) => {
                // Guard: a cycle must never hand back something worse.
                out.stats.cut_after = prev_m.cut;
                labels = Some((prev, prev_m));
            }
            _ => {
                out.stats.cut_after = after.cut;
                labels = Some((out.labels, after));
            }
        }
        vstats.push(out.stats);
    }
    let (mut labels, mut metrics) = labels.expect("at least one V-cycle");

    // Last resort when refinement left a block overloaded: a few more
    // refinement sweeps with the overload rule active, one at a time.
    for attempt in 0..3u64 {
        if metrics.feasible(&lmax) {
            break;
        }
        let seed = balance_seed(cfg.seed, attempt);
        match tp {
            Some(t) => {
                let mut d = distribute(g, p)?.swap_remove(t.pe());
                for v in 0..d.n_owned() {
                    d.set_label(v, labels.get(d.global_of_local(v)));
                }
                d.refresh_ghost_labels(*t);
                let mut view = AllreduceBlockWeights::new(&d, cfg.k, lmax.floor_weight(), *t);
                let opts = DistLpOptions {
                    policy: LpPolicy::Refine {
                        bound: lmax.floor_weight(),
                    },
                    restriction: None,
                    rounds: 1,
                    ordering: OrderingKind::Random,
                    seed,
                    stop_on_quiescence: true,
                    trace: false,
                };
                parallel_lp(&mut d, &mut view, &opts, *t);
                labels = gather_labels(&d, *t);
            }
            None => {
                let mut weights = VecBlockWeights::of_partition(g, &labels, cfg.k);
                let mode = LpMode {
                    policy: LpPolicy::Refine {
                        bound: lmax.floor_weight(),
                    },
                    restriction: None,
                    rounds: 1,
                    ordering: OrderingKind::Random,
                };
                run_lp(g, &mut labels, &mode, &mut weights, seed);
            }
        }
        metrics = evaluate(g, &labels, cfg.k)?;
    }

    times.total_s = total.elapsed().as_secs_f64();
    Ok(RunReport {
        feasible: metrics.feasible(&lmax),
        cut: metrics.cut,
        block_weights: metrics.block_weights,
        max_block_weight: metrics.max_block_weight,
        imbalance: metrics.imbalance,
        labels,
        vcycles: vstats,
        times,
    })
}

pub fn run_preset(
    g: &Graph,
    preset: &str,
    k: usize,
    seed: u64,
    tp: &mut impl Transport,
) -> Result<RunReport, PipelineError> {
    let preset: Preset = preset.parse().map_err(PipelineError::Config)?;
    let mut cfg = Config::preset(preset, k);
    cfg.seed = seed;
    cfg.procs = tp.num_pes();
    partition(g, &cfg, tp)
}
