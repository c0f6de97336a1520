//! Coarse-grained evolutionary partitioning of the replicated coarsest
//! graph.
//!
//! Every PE keeps a small population of k-partitions and loops: pick two
//! random parents, combine them, occasionally mutate, periodically gossip
//! the local best to a few random peers. The combine operator is itself a
//! mini multilevel run whose clustering may not span a cut edge of either
//! parent; the better parent's partition transfers losslessly to the
//! coarsest level, so refinement can only improve it. That is what makes
//! the offspring guarantee (cut no worse than the better feasible parent)
//! a hard assertion rather than a hope.

use crate::coarsen::{contract, CoarseMapping};
use crate::dist::transport::Transport;
use crate::graph::{evaluate, Graph, Labels, WeightBound};
use crate::lp::{run_lp, LpMode, LpPolicy, OrderingKind, VecBlockWeights};
use crate::rng::{self, SplitMix64};
use crate::{BlockId, Weight};
use std::time::Instant;

/// One member of a population: a k-partition with cached metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub labels: Labels,
    pub cut: Weight,
    pub feasible: bool,
}

impl Individual {
    pub fn from_labels(g: &Graph, labels: Labels, k: usize, lmax: &WeightBound) -> Individual {
        let m = evaluate(g, &labels, k).expect("invalid candidate partition");
        Individual {
            labels,
            cut: m.cut,
            feasible: m.feasible(lmax),
        }
    }

    /// Sort key: feasible individuals first, then lower cut.
    fn rank(&self) -> (bool, Weight) {
        (!self.feasible, self.cut)
    }

    fn beats(&self, other: &Individual) -> bool {
        self.rank() < other.rank()
    }
}

/// Bounded set of individuals; inserts evict the worst, never the best.
#[derive(Debug, Clone)]
pub struct Population {
    individuals: Vec<Individual>,
    capacity: usize,
}

impl Population {
    pub fn new(capacity: usize) -> Population {
        assert!(capacity >= 1);
        Population {
            individuals: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn best(&self) -> &Individual {
        self.individuals
            .iter()
            .min_by_key(|i| i.rank())
            .expect("empty population")
    }

    /// Inserts by replacement policy: fill to capacity, then replace the
    /// worst individual if the newcomer beats it. The best never leaves.
    pub fn insert(&mut self, ind: Individual) {
        if self.individuals.len() < self.capacity {
            self.individuals.push(ind);
            return;
        }
        let worst = self
            .individuals
            .iter()
            .enumerate()
            .max_by_key(|(i, ind)| (ind.rank(), *i))
            .map(|(i, _)| i)
            .expect("empty population at capacity");
        if ind.beats(&self.individuals[worst]) {
            self.individuals[worst] = ind;
        }
    }
}

/// Knobs of the evolutionary stage.
#[derive(Debug, Clone)]
pub struct EvoParams {
    pub k: usize,
    pub lmax: WeightBound,
    /// Propagation rounds per coarsening level inside combine and mutate.
    pub rounds_coarsen: u32,
    /// Propagation rounds per refinement pass.
    pub rounds_refine: u32,
    /// Cluster-size divisor f: the coarsening bound is max node weight or
    /// L_max/f, whichever is larger.
    pub cluster_factor: u64,
    pub capacity: usize,
    /// Individuals created per PE before the generation loop.
    pub initial_fill: usize,
    pub mutation_prob: f64,
    /// Generations between gossip rounds.
    pub exchange_period: u32,
}

impl EvoParams {
    pub fn new(k: usize, lmax: WeightBound) -> EvoParams {
        EvoParams {
            k,
            lmax,
            rounds_coarsen: 3,
            rounds_refine: 6,
            cluster_factor: 14,
            capacity: 8,
            initial_fill: 4,
            mutation_prob: 0.1,
            exchange_period: 10,
        }
    }
}

/// Stop condition of the generation loop. Seconds budgets stop via a
/// collective decision so all PEs leave together; they are wall-clock
/// bound and hence not reproducible run to run, unlike the other two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvoBudget {
    InitialOnly,
    Generations(u32),
    Seconds(f64),
}

/// Counters and per-generation local best cuts from one PE's evolve loop.
#[derive(Debug, Clone, Default)]
pub struct EvoStats {
    pub generations: u32,
    pub combines: u64,
    pub mutations: u64,
    /// Local best (feasibility, cut) after each generation.
    pub best_history: Vec<(bool, Weight)>,
}

/// Builds one partition by greedy graph growing plus refinement.
///
/// k regions grow from random seeds, each step absorbing the frontier
/// node with the largest gain (edge weight into the region minus edge
/// weight to the rest), until the region reaches the average block
/// weight. Growth restarts from a fresh random seed when a region's
/// component is exhausted, which handles disconnected graphs. Unreached
/// nodes join the least-loaded adjacent block (or the least-loaded block
/// overall when isolated), then refinement rounds correct what greed got
/// wrong.
pub fn create_initial(g: &Graph, params: &EvoParams, rng: &mut SplitMix64) -> Individual {
    let k = params.k;
    let n = g.n();
    if k == 1 {
        return Individual::from_labels(g, Labels::constant(n, 0), 1, &params.lmax);
    }
    let target = g.total_node_weight().div_ceil(k as u64);
    let mut labels = vec![usize::MAX; n];
    let mut unassigned = n;
    // Lazy max-heap frontier: entries are (gain, Reverse(node)); stale
    // entries are skipped by comparing against the current gain. Gains
    // are valid only for the block stamped in `touched`.
    let mut heap: std::collections::BinaryHeap<(i64, std::cmp::Reverse<usize>)> =
        std::collections::BinaryHeap::new();
    let mut gain = vec![0i64; n];
    let mut touched = vec![usize::MAX; n];
    let weighted_degree =
        |v: usize| g.neighbors(v).map(|(_, w)| w as i64).sum::<i64>();
    for b in 0..k {
        heap.clear();
        let mut weight = 0u64;
        while weight < target && unassigned > 0 {
            let v = loop {
                match heap.pop() {
                    Some((gn, std::cmp::Reverse(v))) => {
                        if labels[v] == usize::MAX && touched[v] == b && gain[v] == gn {
                            break v;
                        }
                    }
                    None => {
                        // Fresh random seed among the unassigned.
                        let pool: Vec<usize> =
                            (0..n).filter(|&v| labels[v] == usize::MAX).collect();
                        break pool[rng.next_below(pool.len() as u64) as usize];
                    }
                }
            };
            labels[v] = b;
            unassigned -= 1;
            weight += g.node_weight(v);
            for (u, w) in g.neighbors(v) {
                if labels[u] != usize::MAX {
                    continue;
                }
                if touched[u] != b {
                    touched[u] = b;
                    gain[u] = 2 * w as i64 - weighted_degree(u);
                } else {
                    gain[u] += 2 * w as i64;
                }
                heap.push((gain[u], std::cmp::Reverse(u)));
            }
        }
    }
    // Leftovers: least-loaded adjacent block, least-loaded overall if none.
    let mut block_weight = vec![0u64; k];
    for v in 0..n {
        if labels[v] != usize::MAX {
            block_weight[labels[v]] += g.node_weight(v);
        }
    }
    for v in 0..n {
        if labels[v] != usize::MAX {
            continue;
        }
        let candidate = g
            .neighbors(v)
            .filter_map(|(u, _)| (labels[u] != usize::MAX).then(|| labels[u]))
            .min_by_key(|&b| (block_weight[b], b));
        let b = candidate.unwrap_or_else(|| {
            (0..k).min_by_key(|&b| (block_weight[b], b)).unwrap()
        });
        labels[v] = b;
        block_weight[b] += g.node_weight(v);
    }
    let mut labels = Labels::from_vec(labels);
    let mut weights = VecBlockWeights::of_partition(g, &labels, k);
    let mode = LpMode {
        policy: LpPolicy::Refine {
            bound: params.lmax.floor_weight(),
        },
        restriction: None,
        rounds: params.rounds_refine,
        ordering: OrderingKind::Random,
    };
    run_lp(g, &mut labels, &mode, &mut weights, rng.next_u64());
    Individual::from_labels(g, labels, k, &params.lmax)
}

/// Multilevel scheme restricted to clusters inside `restriction` blocks,
/// initialized at the coarsest level with `init` (which must be constant
/// on every restriction block so it transfers losslessly).
fn mini_multilevel(
    g: &Graph,
    restriction: &[BlockId],
    init: &Labels,
    params: &EvoParams,
    f: u64,
    rng: &mut SplitMix64,
) -> Individual {
    let floor_n = (2 * params.k).max(32);
    let refine_bound = params.lmax.floor_weight();
    // Coarsening stack: graphs plus mappings downward, restriction and
    // init labels carried level by level.
    let mut stack: Vec<(Graph, CoarseMapping)> = Vec::new();
    let mut cur = g.clone();
    let mut cur_restriction: Vec<BlockId> = restriction.to_vec();
    let mut cur_init: Labels = init.clone();
    let mut stalls = 0u32;
    while cur.n() > floor_n && stalls < 2 {
        let bound = cur.max_node_weight().max(params.lmax.divided_floor(f)).max(1);
        let mut clustering = Labels::identity(cur.n());
        let mut weights = VecBlockWeights::singletons(&cur);
        let mode = LpMode {
            policy: LpPolicy::Cluster { bound },
            restriction: Some(&cur_restriction),
            rounds: params.rounds_coarsen,
            ordering: OrderingKind::DegreeIncreasing,
        };
        run_lp(&cur, &mut clustering, &mode, &mut weights, rng.next_u64());
        let (coarse, mapping) = contract(&cur, &clustering);
        // Protected edges survive: no cluster may straddle a restriction
        // boundary, hence no parent cut edge is ever contracted away.
        for v in 0..cur.n() {
            for (u, _) in cur.neighbors(v) {
                if cur_restriction[v] != cur_restriction[u] {
                    assert_ne!(
                        mapping.coarse_of(v),
                        mapping.coarse_of(u),
                        "cluster contracted a protected edge"
                    );
                }
            }
        }
        if 20 * coarse.n() > 19 * cur.n() {
            stalls += 1;
        } else {
            stalls = 0;
        }
        let mut coarse_restriction = vec![0; coarse.n()];
        let mut coarse_init = vec![0; coarse.n()];
        for v in 0..cur.n() {
            coarse_restriction[mapping.coarse_of(v)] = cur_restriction[v];
            coarse_init[mapping.coarse_of(v)] = cur_init.get(v);
        }
        cur_restriction = coarse_restriction;
        cur_init = Labels::from_vec(coarse_init);
        stack.push((std::mem::replace(&mut cur, coarse), mapping));
    }
    // Refine from the coarsest level back up.
    let mut labels = cur_init;
    loop {
        let mut weights = VecBlockWeights::of_partition(&cur, &labels, params.k);
        let mode = LpMode {
            policy: LpPolicy::Refine { bound: refine_bound },
            restriction: None,
            rounds: params.rounds_refine,
            ordering: OrderingKind::Random,
        };
        run_lp(&cur, &mut labels, &mode, &mut weights, rng.next_u64());
        match stack.pop() {
            Some((finer, mapping)) => {
                labels = mapping.project(&labels);
                cur = finer;
            }
            None => break,
        }
    }
    Individual::from_labels(g, labels, params.k, &params.lmax)
}

/// Crosses two partitions: cluster coarsening that never contracts a cut
/// edge of either parent, the better parent applied at the coarsest level,
/// refinement on the way up. For feasible parents the offspring's cut is
/// asserted to be at most the better parent's.
pub fn combine(
    p1: &Individual,
    p2: &Individual,
    g: &Graph,
    params: &EvoParams,
    rng: &mut SplitMix64,
) -> Individual {
    // Overlay: connected components of the graph minus both cut-edge sets.
    let overlay = cut_free_components(g, &p1.labels, &p2.labels);
    let better = if p2.beats(p1) { p2 } else { p1 };
    let child = mini_multilevel(g, &overlay, &better.labels, params, params.cluster_factor, rng);
    if p1.feasible && p2.feasible {
        assert!(
            child.cut <= p1.cut.min(p2.cut),
            "offspring cut {} worse than parents {} / {}",
            child.cut,
            p1.cut,
            p2.cut
        );
    }
    child
}

/// Component labeling of the graph without either parent's cut edges.
fn cut_free_components(g: &Graph, l1: &Labels, l2: &Labels) -> Vec<BlockId> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    let mut queue = std::collections::VecDeque::new();
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for (u, _) in g.neighbors(v) {
                if comp[u] == usize::MAX && l1.get(u) == l1.get(v) && l2.get(u) == l2.get(v) {
                    comp[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Diversification: one restricted V-cycle against the individual itself
/// with a fresh cluster-size divisor drawn from [10, 25].
pub fn mutate(ind: &Individual, g: &Graph, params: &EvoParams, rng: &mut SplitMix64) -> Individual {
    if params.k == 1 {
        return ind.clone();
    }
    let f = rng.next_range(10, 25);
    mini_multilevel(g, ind.labels.as_slice(), &ind.labels, params, f, rng)
}

fn encode_individual(ind: &Individual) -> Vec<u8> {
    let mut buf = Vec::with_capacity(8 * (ind.labels.len() + 2));
    buf.extend_from_slice(&ind.cut.to_le_bytes());
    buf.extend_from_slice(&(ind.feasible as u64).to_le_bytes());
    for v in 0..ind.labels.len() {
        buf.extend_from_slice(&(ind.labels.get(v) as u64).to_le_bytes());
    }
    buf
}

fn decode_individual(bytes: &[u8]) -> Individual {
    let u = |at: usize| u64::from_le_bytes(bytes[8 * at..8 * at + 8].try_into().unwrap());
    let cut = u(0);
    let feasible = u(1) != 0;
    let labels = (2..bytes.len() / 8).map(|i| u(i) as usize).collect();
    Individual {
        labels: Labels::from_vec(labels),
        cut,
        feasible,
    }
}

/// Gossips the local best to ⌈log2 P⌉ distinct random peers; received
/// individuals go through the replacement policy. No-op for P = 1.
pub fn exchange_step(
    pop: &mut Population,
    tp: &mut impl Transport,
    rng: &mut SplitMix64,
) {
    let p = tp.num_pes();
    if p < 2 {
        return;
    }
    let fanout = (p as f64).log2().ceil() as usize;
    let mut peers: Vec<usize> = (0..p).filter(|&q| q != tp.pe()).collect();
    rng.shuffle(&mut peers);
    peers.truncate(fanout);
    let encoded = encode_individual(pop.best());
    let mut out = vec![Vec::new(); p];
    for &q in &peers {
        out[q] = encoded.clone();
    }
    out[tp.pe()] = Vec::new();
    let received = tp.alltoall(out);
    for (q, buf) in received.into_iter().enumerate() {
        if q != tp.pe() && !buf.is_empty() {
            pop.insert(decode_individual(&buf));
        }
    }
}

/// Runs one PE's evolve loop over the replicated coarsest graph and
/// returns the globally best individual (identical on every PE) along
/// with local statistics. Collective.
pub fn evolve(
    g: &Graph,
    params: &EvoParams,
    budget: EvoBudget,
    seed: u64,
    seeded: Option<&Labels>,
    tp: &mut impl Transport,
) -> (Individual, EvoStats) {
    let mut rng = SplitMix64::new(rng::mix(&[seed, 0x65766f, tp.pe() as u64]));
    let mut pop = Population::new(params.capacity);
    if let Some(labels) = seeded {
        pop.insert(Individual::from_labels(g, labels.clone(), params.k, &params.lmax));
    }
    for _ in 0..params.initial_fill.max(1) {
        if pop.len() >= params.capacity {
            break;
        }
        pop.insert(create_initial(g, params, &mut rng));
    }
    let mut stats = EvoStats::default();
    let start = Instant::now();
    let mut generation = 0u32;
    loop {
        let go_on = match budget {
            EvoBudget::InitialOnly => false,
            EvoBudget::Generations(gens) => generation < gens,
            EvoBudget::Seconds(s) => {
                // Collective decision: all PEs stop together.
                let expired = (start.elapsed().as_secs_f64() >= s) as u64;
                tp.allreduce_sum(&[expired])[0] == 0
            }
        };
        if !go_on {
            break;
        }
        generation += 1;
        let (a, b) = pick_two(pop.len(), &mut rng);
        let child = combine(&pop.individuals()[a], &pop.individuals()[b], g, params, &mut rng);
        stats.combines += 1;
        pop.insert(child);
        if rng.next_f64() < params.mutation_prob {
            let i = rng.next_below(pop.len() as u64) as usize;
            let mutant = mutate(&pop.individuals()[i], g, params, &mut rng);
            stats.mutations += 1;
            pop.insert(mutant);
        }
        if params.exchange_period > 0 && generation % params.exchange_period == 0 {
            exchange_step(&mut pop, tp, &mut rng);
        }
        stats.best_history.push({
            let b = pop.best();
            (b.feasible, b.cut)
        });
    }
    stats.generations = generation;
    // Global best: gather everyone's best and pick deterministically by
    // (feasible, cut, pe).
    let gathered = tp.gather_all(encode_individual(pop.best()));
    let best = gathered
        .iter()
        .enumerate()
        .map(|(pe, buf)| (pe, decode_individual(buf)))
        .min_by_key(|(pe, ind)| (ind.rank(), *pe))
        .map(|(_, ind)| ind)
        .expect("no PEs");
    (best, stats)
}

/// Two uniformly random indices, distinct whenever the pool allows it.
fn pick_two(len: usize, rng: &mut SplitMix64) -> (usize, usize) {
    assert!(len >= 1);
    if len == 1 {
        return (0, 0);
    }
    let a = rng.next_below(len as u64) as usize;
    let mut b = rng.next_below(len as u64 - 1) as usize;
    if b >= a {
        b += 1;
    }
    (a, b)
}
