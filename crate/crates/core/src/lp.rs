//! Size-constrained label propagation.
//!
//! One engine serves two phases. During coarsening it runs in `Cluster` mode:
//! every node starts as its own cluster and repeatedly joins the neighboring
//! cluster it is most strongly connected to, subject to the cluster-weight
//! bound `U`. During uncoarsening it runs in `Refine` mode over a fixed set
//! of `k` blocks against the balance bound `L_max`, where a node in an
//! overloaded block must leave it if any other block can take it.
//!
//! A round visits each node once in a configurable order. Connection weights
//! per candidate block are accumulated in a linear-probing scratch map sized
//! to the maximum degree and cleared through a touched-slot list, so a round
//! costs O(n + m) regardless of how many blocks exist. Ties between equally
//! attractive blocks are broken by a hash of (seed, round, node), which makes
//! decisions independent of visit order and of the number of processing
//! elements; a tie that includes the node's current block resolves to
//! staying, so refinement never trades a cut improvement for noise.
//!
//! The distributed runtime reuses [`select_target`] and the scratch map so
//! that one PE reproduces this sequential engine exactly.

use crate::graph::{Graph, Labels};
use crate::rng::{self, SplitMix64};
use crate::{BlockId, NodeId, Weight};

/// Visit order for one label propagation invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingKind {
    /// Seeded uniform shuffle, drawn fresh each round.
    Random,
    /// Nodes by ascending degree, ties by node id; fixed across rounds.
    DegreeIncreasing,
}

/// Block weights as seen by the engine while deciding moves.
///
/// The sequential engine uses an exact array. The distributed runtime
/// substitutes views with relaxed freshness: locally maintained cluster
/// weights during coarsening, allreduce-restored block weights during
/// refinement. After any accepted move of a node with weight `w` from `a` to
/// `b`, `weight(a)` must drop by `w` and `weight(b)` rise by `w`.
pub trait BlockWeightView {
    fn weight(&self, block: BlockId) -> Weight;
    fn apply_move(&mut self, from: BlockId, to: BlockId, w: Weight);
}

/// Exact block weights in a dense array.
#[derive(Debug, Clone)]
pub struct VecBlockWeights {
    w: Vec<Weight>,
}

impl VecBlockWeights {
    pub fn new(w: Vec<Weight>) -> Self {
        VecBlockWeights { w }
    }

    /// One singleton cluster per node.
    pub fn singletons(g: &Graph) -> Self {
        VecBlockWeights {
            w: g.node_weights().to_vec(),
        }
    }

    /// Block weights of a k-partition.
    pub fn of_partition(g: &Graph, labels: &Labels, k: usize) -> Self {
        let mut w = vec![0; k];
        for v in 0..g.n() {
            w[labels.get(v)] += g.node_weight(v);
        }
        VecBlockWeights { w }
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.w
    }
}

impl BlockWeightView for VecBlockWeights {
    #[inline]
    fn weight(&self, block: BlockId) -> Weight {
        self.w[block]
    }

    #[inline]
    fn apply_move(&mut self, from: BlockId, to: BlockId, w: Weight) {
        self.w[from] -= w;
        self.w[to] += w;
    }
}

/// Move rule for one engine invocation.
#[derive(Debug, Clone, Copy)]
pub enum LpPolicy {
    /// Clustering: a move is allowed if the target cluster stays within
    /// `bound`. The node's own cluster is always allowed as "stay".
    Cluster { bound: Weight },
    /// Refinement: targets must stay within `bound` (= floor of L_max). A
    /// node whose own block exceeds the bound must not count its own block
    /// as a candidate.
    Refine { bound: Weight },
}

impl LpPolicy {
    #[inline]
    pub fn bound(&self) -> Weight {
        match *self {
            LpPolicy::Cluster { bound } | LpPolicy::Refine { bound } => bound,
        }
    }
}

/// Full engine configuration for [`run_lp`].
#[derive(Debug, Clone, Copy)]
pub struct LpMode<'a> {
    pub policy: LpPolicy,
    /// When set, a node only considers neighbors with the same label in this
    /// reference partition, which keeps every cluster inside one reference
    /// block (the restriction used by V-cycles and recombination).
    pub restriction: Option<&'a [BlockId]>,
    pub rounds: u32,
    pub ordering: OrderingKind,
}

/// Linear-probing accumulator keyed by block id, cleared via touched list.
///
/// Capacity is at least twice the expected number of distinct keys (the
/// node degree) and grows if a burst of keys exceeds half the table.
pub struct ClusterScratch {
    keys: Vec<BlockId>,
    vals: Vec<Weight>,
    touched: Vec<usize>,
    mask: usize,
    probes: u64,
}

const EMPTY: BlockId = usize::MAX;

impl ClusterScratch {
    pub fn with_expected_keys(expected: usize) -> Self {
        let cap = (2 * expected.max(2)).next_power_of_two();
        ClusterScratch {
            keys: vec![EMPTY; cap],
            vals: vec![0; cap],
            touched: Vec::with_capacity(expected.max(2)),
            mask: cap - 1,
            probes: 0,
        }
    }

    fn grow(&mut self) {
        let old: Vec<(BlockId, Weight)> = self.iter().collect();
        let cap = self.keys.len() * 2;
        self.keys = vec![EMPTY; cap];
        self.vals = vec![0; cap];
        self.mask = cap - 1;
        self.touched.clear();
        for (k, v) in old {
            self.add(k, v);
        }
    }

    #[inline]
    pub fn add(&mut self, key: BlockId, w: Weight) {
        if 2 * (self.touched.len() + 1) > self.keys.len() {
            self.grow();
        }
        let mut slot = rng::finalize(key as u64) as usize & self.mask;
        loop {
            self.probes += 1;
            if self.keys[slot] == key {
                self.vals[slot] += w;
                return;
            }
            if self.keys[slot] == EMPTY {
                self.keys[slot] = key;
                self.vals[slot] = w;
                self.touched.push(slot);
                return;
            }
            slot = (slot + 1) & self.mask;
        }
    }

    #[inline]
    pub fn get(&self, key: BlockId) -> Weight {
        let mut slot = rng::finalize(key as u64) as usize & self.mask;
        loop {
            if self.keys[slot] == key {
                return self.vals[slot];
            }
            if self.keys[slot] == EMPTY {
                return 0;
            }
            slot = (slot + 1) & self.mask;
        }
    }

    /// Touched entries in first-touch order.
    pub fn iter(&self) -> impl Iterator<Item = (BlockId, Weight)> + '_ {
        self.touched.iter().map(|&s| (self.keys[s], self.vals[s]))
    }

    pub fn clear(&mut self) {
        for &s in &self.touched {
            self.keys[s] = EMPTY;
            self.vals[s] = 0;
        }
        self.touched.clear();
    }

    pub fn len(&self) -> usize {
        self.touched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }

    /// Cumulative probe steps, for complexity accounting.
    pub fn probes(&self) -> u64 {
        self.probes
    }
}

/// Reusable per-round working memory.
pub struct MoveScratch {
    pub conn: ClusterScratch,
    ties: Vec<BlockId>,
}

impl MoveScratch {
    pub fn for_max_degree(max_degree: usize) -> Self {
        MoveScratch {
            conn: ClusterScratch::with_expected_keys(max_degree),
            ties: Vec::new(),
        }
    }
}

/// Derives the tie-breaking hash key for a (round, node) decision.
#[inline]
pub fn tie_seed(base: u64, round: u64, node: u64) -> u64 {
    rng::mix(&[base, 0x7469_65, round, node])
}

/// Derives the seed for the round's random visit order.
#[inline]
pub fn order_seed(base: u64, round: u64) -> u64 {
    rng::mix(&[base, 0x6f72_6465_72, round])
}

/// Picks the strongest eligible block for one node, or `None` to stay.
///
/// `neighbors` yields `(block-of-neighbor, edge-weight)` pairs, already
/// filtered by any restriction. Connection weights per block are summed; the
/// eligible block with the largest connection wins. Ties are broken by
/// `tie_seed`, except that a tie involving the node's own block resolves to
/// staying. In `Refine` mode a node whose block exceeds the bound must
/// ignore its own block entirely; if nothing else is eligible it stays.
pub fn select_target(
    scratch: &mut MoveScratch,
    own_block: BlockId,
    node_weight: Weight,
    policy: &LpPolicy,
    weights: &impl BlockWeightView,
    neighbors: impl Iterator<Item = (BlockId, Weight)>,
    tie_seed: u64,
) -> Option<BlockId> {
    scratch.conn.clear();
    for (b, w) in neighbors {
        scratch.conn.add(b, w);
    }
    if scratch.conn.is_empty() {
        return None;
    }
    let bound = policy.bound();
    let own_excluded = match policy {
        LpPolicy::Cluster { .. } => false,
        LpPolicy::Refine { .. } => weights.weight(own_block) > bound,
    };
    let mut best_conn: Weight = 0;
    let mut own_is_best = false;
    scratch.ties.clear();
    for (b, conn) in scratch.conn.iter() {
        let eligible = if b == own_block {
            !own_excluded
        } else {
            weights.weight(b).saturating_add(node_weight) <= bound
        };
        if !eligible {
            continue;
        }
        if conn > best_conn {
            best_conn = conn;
            scratch.ties.clear();
            scratch.ties.push(b);
            own_is_best = b == own_block;
        } else if conn == best_conn {
            scratch.ties.push(b);
            own_is_best |= b == own_block;
        }
    }
    if scratch.ties.is_empty() || own_is_best {
        return None;
    }
    let pick = if scratch.ties.len() == 1 {
        scratch.ties[0]
    } else {
        let i = rng::mix(&[tie_seed]) as usize % scratch.ties.len();
        scratch.ties[i]
    };
    debug_assert_ne!(pick, own_block);
    Some(pick)
}

/// Outcome of a single round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundStats {
    pub moves: u64,
    /// Node visits + adjacency scans + scratch-map probes.
    pub ops: u64,
}

/// Visits every node once in `order`, applying the move rule. Returns the
/// number of accepted moves (a resolved stay is not a move).
pub fn lp_round(
    g: &Graph,
    labels: &mut Labels,
    mode: &LpMode,
    weights: &mut impl BlockWeightView,
    order: &[NodeId],
    scratch: &mut MoveScratch,
    tie_base: u64,
    round: u64,
) -> RoundStats {
    let mut moves = 0u64;
    let mut ops = 0u64;
    let probes_before = scratch.conn.probes();
    for &v in order {
        ops += 1 + g.degree(v) as u64;
        let own = labels.get(v);
        let cv = g.node_weight(v);
        let target = {
            let lbl = labels.as_slice();
            match mode.restriction {
                None => select_target(
                    scratch,
                    own,
                    cv,
                    &mode.policy,
                    weights,
                    g.neighbors(v).map(|(u, w)| (lbl[u], w)),
                    tie_seed(tie_base, round, v as u64),
                ),
                Some(r) => {
                    let rv = r[v];
                    select_target(
                        scratch,
                        own,
                        cv,
                        &mode.policy,
                        weights,
                        g.neighbors(v)
                            .filter(|&(u, _)| r[u] == rv)
                            .map(|(u, w)| (lbl[u], w)),
                        tie_seed(tie_base, round, v as u64),
                    )
                }
            }
        };
        if let Some(t) = target {
            labels.set(v, t);
            weights.apply_move(own, t, cv);
            moves += 1;
        }
    }
    RoundStats {
        moves,
        ops: ops + (scratch.conn.probes() - probes_before),
    }
}

/// Computes the visit order for one round.
pub fn node_ordering(g: &Graph, kind: OrderingKind, rng: &mut SplitMix64) -> Vec<NodeId> {
    ordering_by(g.n(), |v| g.degree(v), kind, rng)
}

/// Ordering over `0..n` given a degree accessor; shared with the distributed
/// engine, which orders its owned nodes by local degree.
pub fn ordering_by(
    n: usize,
    degree: impl Fn(usize) -> usize,
    kind: OrderingKind,
    rng: &mut SplitMix64,
) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..n).collect();
    match kind {
        OrderingKind::DegreeIncreasing => {
            // Stable sort keeps ties in ascending node id order.
            order.sort_by_key(|&v| degree(v));
        }
        OrderingKind::Random => rng.shuffle(&mut order),
    }
    order
}

/// Aggregate over an engine invocation of up to `mode.rounds` rounds.
#[derive(Debug, Clone, Default)]
pub struct LpStats {
    pub rounds: Vec<RoundStats>,
    pub total_moves: u64,
}

impl LpStats {
    pub fn rounds_run(&self) -> u32 {
        self.rounds.len() as u32
    }

    pub fn total_ops(&self) -> u64 {
        self.rounds.iter().map(|r| r.ops).sum()
    }
}

/// Runs rounds until the budget is exhausted or a round moves nothing.
///
/// `seed` scopes all randomness of this invocation; pre-mix it with level
/// and cycle context so hierarchy stages draw independent streams.
pub fn run_lp(
    g: &Graph,
    labels: &mut Labels,
    mode: &LpMode,
    weights: &mut impl BlockWeightView,
    seed: u64,
) -> LpStats {
    let mut scratch = MoveScratch::for_max_degree(g.max_degree());
    let degree_order = match mode.ordering {
        OrderingKind::DegreeIncreasing => {
            let mut unused = SplitMix64::new(0);
            Some(node_ordering(g, OrderingKind::DegreeIncreasing, &mut unused))
        }
        OrderingKind::Random => None,
    };
    let mut stats = LpStats::default();
    for round in 0..mode.rounds {
        let shuffled;
        let order: &[NodeId] = match &degree_order {
            Some(o) => o,
            None => {
                let mut rng = SplitMix64::new(order_seed(seed, round as u64));
                shuffled = node_ordering(g, OrderingKind::Random, &mut rng);
                &shuffled
            }
        };
        let rs = lp_round(g, labels, mode, weights, order, &mut scratch, seed, round as u64);
        stats.total_moves += rs.moves;
        stats.rounds.push(rs);
        if rs.moves == 0 {
            break;
        }
    }
    stats
}
