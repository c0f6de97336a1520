//! Core graph representation and partition metrics.
//!
//! Graphs are undirected with positive integer node and edge weights, stored
//! in CSR form with each adjacency list sorted by neighbor id. Every
//! undirected edge appears as two directed entries. Constructors validate the
//! invariants (symmetry, no self-loops, positive weights) and merge parallel
//! edges by weight summation, so the rest of the crate can rely on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::{BlockId, NodeId, Weight};

/// Invariant violations detected while building or evaluating a graph.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {u} lists neighbor {v} but {v} does not list {u} with equal weight")]
    Asymmetric { u: NodeId, v: NodeId },
    #[error("self loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({u}, {v}) has zero weight")]
    ZeroEdgeWeight { u: NodeId, v: NodeId },
    #[error("node {0} has zero weight")]
    ZeroNodeWeight(NodeId),
    #[error("node {u} lists neighbor {v} outside 0..{n}")]
    NeighborOutOfRange { u: NodeId, v: NodeId, n: usize },
    #[error("label vector has length {got}, graph has {want} nodes")]
    LabelLengthMismatch { got: usize, want: usize },
    #[error("node {node} carries label {label}, expected < {bound}")]
    LabelOutOfRange {
        node: NodeId,
        label: BlockId,
        bound: usize,
    },
    #[error("k must be >= 1")]
    ZeroBlocks,
}

/// Exact fraction used for the imbalance parameter epsilon.
///
/// Kept as an unreduced non-negative `num/den` pair; all comparisons go
/// through integer arithmetic so parsing "0.03" never loses to binary
/// rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Option<Fraction> {
        if den == 0 {
            return None;
        }
        Some(Fraction { num, den })
    }

    pub fn zero() -> Fraction {
        Fraction { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Parses either a decimal like `0.03` or a ratio like `3/100`, exactly.
    pub fn parse(s: &str) -> Option<Fraction> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().ok()?;
            let den: u64 = b.trim().parse().ok()?;
            return Fraction::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
            if frac.is_empty() {
                return Fraction::new(int, 1);
            }
            if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let den = 10u64.checked_pow(frac.len() as u32)?;
            let num = int.checked_mul(den)?.checked_add(frac.parse().ok()?)?;
            return Fraction::new(num, den);
        }
        let int: u64 = s.parse().ok()?;
        Fraction::new(int, 1)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Exact block-weight bound `L_max = (1 + eps) * ceil(total/k)`.
///
/// Stored as a reduced rational. Because node weights are integers,
/// `w <= L_max` is equivalent to `w <= floor(L_max)`, which is what the hot
/// paths compare against; the rational form is kept for reporting and for
/// deriving the coarsening bound `L_max / f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightBound {
    num: u128,
    den: u128,
    floor: Weight,
}

impl WeightBound {
    /// Largest integer weight that satisfies the bound.
    #[inline]
    pub fn floor_weight(&self) -> Weight {
        self.floor
    }

    /// Exact test `w <= L_max`.
    #[inline]
    pub fn fits(&self, w: Weight) -> bool {
        w <= self.floor
    }

    /// Exact test `w > L_max` (the overload condition).
    #[inline]
    pub fn exceeded_by(&self, w: Weight) -> bool {
        w > self.floor
    }

    /// Reduced numerator/denominator of the exact bound.
    pub fn as_ratio(&self) -> (u128, u128) {
        (self.num, self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(L_max / f)`, the cluster-size bound used during coarsening.
    pub fn divided_floor(&self, f: u64) -> Weight {
        assert!(f > 0);
        (self.num / (self.den * f as u128)) as Weight
    }
}

/// Computes `L_max = (1 + eps) * ceil(total_weight / k)` exactly.
pub fn compute_lmax(total_weight: Weight, k: usize, eps: Fraction) -> Result<WeightBound, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroBlocks);
    }
    let ceil_avg = (total_weight as u128).div_ceil(k as u128);
    let num = (eps.den as u128 + eps.num as u128) * ceil_avg;
    let den = eps.den as u128;
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    Ok(WeightBound {
        num,
        den,
        floor: (num / den) as Weight,
    })
}

/// Undirected weighted graph in CSR form.
///
/// Adjacency lists are sorted by neighbor id, parallel edges are merged, and
/// both directions of every edge are present with equal weight. Structural
/// equality (`==`) is therefore meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    first_out: Vec<usize>,
    head: Vec<NodeId>,
    eweight: Vec<Weight>,
    nweight: Vec<Weight>,
    total_edge_weight: Weight,
}

impl Graph {
    /// Builds a graph from one entry per undirected edge.
    ///
    /// Duplicate `(u, v)` pairs (in either orientation) are merged by
    /// summing their weights. Node weights default to 1 when `None`.
    pub fn from_edges(
        n: usize,
        node_weights: Option<Vec<Weight>>,
        edges: impl IntoIterator<Item = (NodeId, NodeId, Weight)>,
    ) -> Result<Graph, GraphError> {
        let nweight = node_weights.unwrap_or_else(|| vec![1; n]);
        assert_eq!(nweight.len(), n, "node weight vector must have length n");
        let mut merged: BTreeMap<(NodeId, NodeId), Weight> = BTreeMap::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n || v >= n {
                let (a, b) = if u >= n { (v.min(n - 1), u) } else { (u, v) };
                return Err(GraphError::NeighborOutOfRange { u: a, v: b, n });
            }
            if w == 0 {
                return Err(GraphError::ZeroEdgeWeight { u, v });
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0) += w;
        }
        for (v, &w) in nweight.iter().enumerate() {
            if w == 0 {
                return Err(GraphError::ZeroNodeWeight(v));
            }
        }

        let mut deg = vec![0usize; n];
        for &(u, v) in merged.keys() {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut first_out = vec![0usize; n + 1];
        for v in 0..n {
            first_out[v + 1] = first_out[v] + deg[v];
        }
        let m2 = first_out[n];
        let mut head = vec![0; m2];
        let mut eweight = vec![0; m2];
        let mut cursor = first_out.clone();
        let mut total_edge_weight: u128 = 0;
        // BTreeMap iteration is ordered by (min, max), which fills each
        // adjacency list in ascending neighbor order.
        for (&(u, v), &w) in &merged {
            head[cursor[u]] = v;
            eweight[cursor[u]] = w;
            cursor[u] += 1;
            total_edge_weight += w as u128;
        }
        // Second pass for the reverse direction; insertion order per node is
        // ascending in the source, so a stable merge keeps lists sorted.
        for (&(u, v), &w) in &merged {
            head[cursor[v]] = u;
            eweight[cursor[v]] = w;
            cursor[v] += 1;
        }
        let mut g = Graph {
            first_out,
            head,
            eweight,
            nweight,
            total_edge_weight: total_edge_weight as Weight,
        };
        g.sort_adjacency();
        Ok(g)
    }

    /// Validates a raw adjacency structure and builds a graph from it.
    ///
    /// `adj[u]` lists `(v, w)` entries. Parallel entries are merged by
    /// summation (both sides must agree on the merged weight). Returns the
    /// first violated invariant otherwise: self loop, zero weight, neighbor
    /// out of range, or asymmetry.
    pub fn from_adjacency(
        node_weights: Vec<Weight>,
        adj: Vec<Vec<(NodeId, Weight)>>,
    ) -> Result<Graph, GraphError> {
        let n = adj.len();
        assert_eq!(node_weights.len(), n, "node weight vector must have length n");
        for (v, &w) in node_weights.iter().enumerate() {
            if w == 0 {
                return Err(GraphError::ZeroNodeWeight(v));
            }
        }
        let mut lists: Vec<Vec<(NodeId, Weight)>> = Vec::with_capacity(n);
        for (u, list) in adj.iter().enumerate() {
            let mut merged: BTreeMap<NodeId, Weight> = BTreeMap::new();
            for &(v, w) in list {
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if v >= n {
                    return Err(GraphError::NeighborOutOfRange { u, v, n });
                }
                if w == 0 {
                    return Err(GraphError::ZeroEdgeWeight { u, v });
                }
                *merged.entry(v).or_insert(0) += w;
            }
            lists.push(merged.into_iter().collect());
        }
        // Symmetry check on the merged lists.
        for (u, list) in lists.iter().enumerate() {
            for &(v, w) in list {
                let back = lists[v]
                    .binary_search_by_key(&u, |&(x, _)| x)
                    .ok()
                    .map(|i| lists[v][i].1);
                if back != Some(w) {
                    return Err(GraphError::Asymmetric { u, v });
                }
            }
        }
        let mut first_out = vec![0usize; n + 1];
        for u in 0..n {
            first_out[u + 1] = first_out[u] + lists[u].len();
        }
        let mut head = Vec::with_capacity(first_out[n]);
        let mut eweight = Vec::with_capacity(first_out[n]);
        let mut total: u128 = 0;
        for list in &lists {
            for &(v, w) in list {
                head.push(v);
                eweight.push(w);
                total += w as u128;
            }
        }
        Ok(Graph {
            first_out,
            head,
            eweight,
            nweight: node_weights,
            total_edge_weight: (total / 2) as Weight,
        })
    }

    /// Builds directly from CSR parts that are already sorted, merged and
    /// symmetric. Used by contraction, which constructs canonical CSR as it
    /// aggregates; invariants are checked in debug builds only.
    pub(crate) fn from_csr_unchecked(
        first_out: Vec<usize>,
        head: Vec<NodeId>,
        eweight: Vec<Weight>,
        nweight: Vec<Weight>,
    ) -> Graph {
        let total: u128 = eweight.iter().map(|&w| w as u128).sum();
        let g = Graph {
            first_out,
            head,
            eweight,
            nweight,
            total_edge_weight: (total / 2) as Weight,
        };
        debug_assert!(g.check_invariants().is_ok(), "{:?}", g.check_invariants());
        g
    }

    fn sort_adjacency(&mut self) {
        for v in 0..self.n() {
            let (lo, hi) = (self.first_out[v], self.first_out[v + 1]);
            let mut pairs: Vec<(NodeId, Weight)> = self.head[lo..hi]
                .iter()
                .copied()
                .zip(self.eweight[lo..hi].iter().copied())
                .collect();
            pairs.sort_unstable_by_key(|&(h, _)| h);
            for (i, (h, w)) in pairs.into_iter().enumerate() {
                self.head[lo + i] = h;
                self.eweight[lo + i] = w;
            }
        }
    }

    pub(crate) fn check_invariants(&self) -> Result<(), GraphError> {
        let n = self.n();
        for u in 0..n {
            let mut prev: Option<NodeId> = None;
            for (v, w) in self.neighbors(u) {
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if v >= n {
                    return Err(GraphError::NeighborOutOfRange { u, v, n });
                }
                if w == 0 {
                    return Err(GraphError::ZeroEdgeWeight { u, v });
                }
                assert!(prev.map_or(true, |p| p < v), "adjacency of {u} not sorted/merged");
                prev = Some(v);
                let back = self.edge_weight_between(v, u);
                if back != Some(w) {
                    return Err(GraphError::Asymmetric { u, v });
                }
            }
        }
        Ok(())
    }

    fn edge_weight_between(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        let (lo, hi) = (self.first_out[u], self.first_out[u + 1]);
        self.head[lo..hi]
            .binary_search(&v)
            .ok()
            .map(|i| self.eweight[lo + i])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.first_out.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.head.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.first_out[v + 1] - self.first_out[v]
    }

    #[inline]
    pub fn node_weight(&self, v: NodeId) -> Weight {
        self.nweight[v]
    }

    pub fn node_weights(&self) -> &[Weight] {
        &self.nweight
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        let (lo, hi) = (self.first_out[v], self.first_out[v + 1]);
        self.head[lo..hi]
            .iter()
            .copied()
            .zip(self.eweight[lo..hi].iter().copied())
    }

    /// Total node weight `c(V)`.
    pub fn total_node_weight(&self) -> Weight {
        self.nweight.iter().sum()
    }

    /// Total edge weight `w(E)` counting each undirected edge once.
    pub fn total_edge_weight(&self) -> Weight {
        self.total_edge_weight
    }

    pub fn max_node_weight(&self) -> Weight {
        self.nweight.iter().copied().max().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Iterates every undirected edge once as `(u, v, w)` with `u < v`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Weight)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }
}

/// Block (or cluster) assignment, one label per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels(Vec<BlockId>);

impl Labels {
    pub fn from_vec(v: Vec<BlockId>) -> Labels {
        Labels(v)
    }

    /// Every node its own singleton cluster: `label(v) = v`.
    pub fn identity(n: usize) -> Labels {
        Labels((0..n).collect())
    }

    pub fn constant(n: usize, b: BlockId) -> Labels {
        Labels(vec![b; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> BlockId {
        self.0[v]
    }

    #[inline]
    pub fn set(&mut self, v: NodeId, b: BlockId) {
        self.0[v] = b;
    }

    pub fn as_slice(&self) -> &[BlockId] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [BlockId] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<BlockId> {
        self.0
    }
}

/// Cut, block weights and imbalance of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMetrics {
    pub cut: Weight,
    pub block_weights: Vec<Weight>,
    pub max_block_weight: Weight,
    /// `max_block_weight / ceil(total/k) - 1`; reporting only, feasibility
    /// decisions use [`WeightBound`].
    pub imbalance: f64,
}

impl PartitionMetrics {
    /// Exact feasibility against a bound: every block weight fits.
    pub fn feasible(&self, bound: &WeightBound) -> bool {
        self.block_weights.iter().all(|&w| bound.fits(w))
    }
}

/// Computes cut weight, block weights and imbalance of `labels` as a
/// `k`-partition of `g`.
pub fn evaluate(g: &Graph, labels: &Labels, k: usize) -> Result<PartitionMetrics, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroBlocks);
    }
    if labels.len() != g.n() {
        return Err(GraphError::LabelLengthMismatch {
            got: labels.len(),
            want: g.n(),
        });
    }
    for v in 0..g.n() {
        if labels.get(v) >= k {
            return Err(GraphError::LabelOutOfRange {
                node: v,
                label: labels.get(v),
                bound: k,
            });
        }
    }
    let mut block_weights = vec![0; k];
    for v in 0..g.n() {
        block_weights[labels.get(v)] += g.node_weight(v);
    }
    let mut directed_cut: u128 = 0;
    for u in 0..g.n() {
        let bu = labels.get(u);
        for (v, w) in g.neighbors(u) {
            if labels.get(v) != bu {
                directed_cut += w as u128;
            }
        }
    }
    let cut = (directed_cut / 2) as Weight;
    let max_block_weight = block_weights.iter().copied().max().unwrap_or(0);
    let ceil_avg = (g.total_node_weight() as u128).div_ceil(k as u128) as f64;
    let imbalance = if ceil_avg == 0.0 {
        0.0
    } else {
        max_block_weight as f64 / ceil_avg - 1.0
    };
    Ok(PartitionMetrics {
        cut,
        block_weights,
        max_block_weight,
        imbalance,
    })
}

/// Builds the quotient graph of a clustering: one node per distinct label,
/// numbered in ascending label order.
///
/// Node weights are summed cluster weights, edge weights are summed crossing
/// weights, intra-cluster edges vanish. Total edge weight of the quotient
/// equals the cut of the clustering.
pub fn quotient_graph(g: &Graph, labels: &Labels) -> Result<Graph, GraphError> {
    if labels.len() != g.n() {
        return Err(GraphError::LabelLengthMismatch {
            got: labels.len(),
            want: g.n(),
        });
    }
    let mut distinct: Vec<BlockId> = labels.as_slice().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut compact: BTreeMap<BlockId, NodeId> = BTreeMap::new();
    for (i, &b) in distinct.iter().enumerate() {
        compact.insert(b, i);
    }
    let nq = distinct.len();
    let mut nweight = vec![0; nq];
    for v in 0..g.n() {
        nweight[compact[&labels.get(v)]] += g.node_weight(v);
    }
    let mut agg: BTreeMap<(NodeId, NodeId), Weight> = BTreeMap::new();
    for (u, v, w) in g.undirected_edges() {
        let (a, b) = (compact[&labels.get(u)], compact[&labels.get(v)]);
        if a != b {
            *agg.entry((a.min(b), a.max(b))).or_insert(0) += w;
        }
    }
    Graph::from_edges(nq, Some(nweight), agg.into_iter().map(|((a, b), w)| (a, b, w)))
}
