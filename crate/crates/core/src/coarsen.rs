//! Cluster contraction and uncoarsening projection.
//!
//! Contracting a clustering replaces each cluster by one node whose weight
//! is the cluster's total node weight; edges between clusters are merged
//! with summed weights and intra-cluster edges vanish. Any partition of the
//! coarse graph therefore projects back to a partition of the finer graph
//! with exactly the same cut and block weights, which is what makes the
//! multilevel scheme sound: improvements found on small graphs are real.

use crate::graph::{Graph, Labels};
use crate::lp::ClusterScratch;
use crate::{BlockId, NodeId, Weight};

/// Renaming between a clustering's labels and contiguous coarse node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseMapping {
    /// Distinct cluster ids in ascending order; index = coarse node id.
    /// Ascending assignment matches the interval scheme the distributed
    /// contraction uses, so both produce identical coarse graphs.
    q: Vec<BlockId>,
    /// Coarse node of every fine node: `c[v] = q^-1(cluster of v)`.
    c: Vec<NodeId>,
}

impl CoarseMapping {
    /// Builds the renaming from raw cluster labels.
    pub fn from_clustering(clustering: &Labels) -> Self {
        let mut q: Vec<BlockId> = clustering.as_slice().to_vec();
        q.sort_unstable();
        q.dedup();
        let max = *q.last().expect("clustering of an empty graph");
        let mut dense = vec![usize::MAX; max + 1];
        for (i, &cl) in q.iter().enumerate() {
            dense[cl] = i;
        }
        let c = clustering.as_slice().iter().map(|&cl| dense[cl]).collect();
        CoarseMapping { q, c }
    }

    pub fn n_coarse(&self) -> usize {
        self.q.len()
    }

    pub fn n_fine(&self) -> usize {
        self.c.len()
    }

    /// Coarse node id of fine node `v`.
    #[inline]
    pub fn coarse_of(&self, v: NodeId) -> NodeId {
        self.c[v]
    }

    pub fn coarse_ids(&self) -> &[NodeId] {
        &self.c
    }

    /// Coarse node id of a cluster id, if the cluster occurred.
    pub fn q(&self, cluster: BlockId) -> Option<NodeId> {
        self.q.binary_search(&cluster).ok()
    }

    /// Cluster id that coarse node `i` replaced.
    pub fn cluster_of_coarse(&self, i: NodeId) -> BlockId {
        self.q[i]
    }

    /// Labels on the fine graph induced by labels on the coarse graph.
    pub fn project(&self, coarse_labels: &Labels) -> Labels {
        assert_eq!(
            coarse_labels.len(),
            self.n_coarse(),
            "coarse label vector does not match the mapping"
        );
        Labels::from_vec(self.c.iter().map(|&i| coarse_labels.get(i)).collect())
    }
}

/// One rung of the multilevel hierarchy: the graph at this level and, when
/// it has been contracted further, the mapping to the next coarser level.
#[derive(Debug, Clone)]
pub struct Level {
    pub graph: Graph,
    pub mapping: Option<CoarseMapping>,
}

/// Contracts a clustering into the coarse graph.
///
/// Coarse adjacency is accumulated per coarse node with the same
/// linear-probing scratch the propagation engine uses, so contraction runs
/// in O(n + m) regardless of cluster count.
pub fn contract(g: &Graph, clustering: &Labels) -> (Graph, CoarseMapping) {
    assert_eq!(clustering.len(), g.n(), "clustering length mismatch");
    let mapping = CoarseMapping::from_clustering(clustering);
    let nc = mapping.n_coarse();

    // Bucket fine nodes by coarse id (counting sort).
    let mut counts = vec![0usize; nc + 1];
    for v in 0..g.n() {
        counts[mapping.coarse_of(v) + 1] += 1;
    }
    for i in 0..nc {
        counts[i + 1] += counts[i];
    }
    let mut members = vec![0 as NodeId; g.n()];
    let mut cursor = counts.clone();
    for v in 0..g.n() {
        let cu = mapping.coarse_of(v);
        members[cursor[cu]] = v;
        cursor[cu] += 1;
    }

    let mut first_out = Vec::with_capacity(nc + 1);
    first_out.push(0usize);
    let mut head: Vec<NodeId> = Vec::new();
    let mut eweight: Vec<Weight> = Vec::new();
    let mut nweight = vec![0 as Weight; nc];
    let mut scratch = ClusterScratch::with_expected_keys(g.max_degree().max(2));
    let mut adj: Vec<(NodeId, Weight)> = Vec::new();
    for cu in 0..nc {
        scratch.clear();
        for &v in &members[counts[cu]..counts[cu + 1]] {
            nweight[cu] += g.node_weight(v);
            for (u, w) in g.neighbors(v) {
                let cv = mapping.coarse_of(u);
                if cv != cu {
                    scratch.add(cv, w);
                }
            }
        }
        adj.clear();
        adj.extend(scratch.iter());
        adj.sort_unstable_by_key(|&(cv, _)| cv);
        for &(cv, w) in &adj {
            head.push(cv);
            eweight.push(w);
        }
        first_out.push(head.len());
    }
    (Graph::from_csr_unchecked(first_out, head, eweight, nweight), mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{evaluate, quotient_graph};
    use crate::rng::SplitMix64;
    use crate::test_util::{bridged_triangles, random_graph};
    use std::collections::BTreeMap;

    /// Brute-force aggregation over (cluster, cluster) pairs.
    fn contract_oracle(g: &Graph, clustering: &Labels) -> (Vec<Weight>, BTreeMap<(usize, usize), Weight>) {
        let mapping = CoarseMapping::from_clustering(clustering);
        let mut nw = vec![0; mapping.n_coarse()];
        for v in 0..g.n() {
            nw[mapping.coarse_of(v)] += g.node_weight(v);
        }
        let mut ew = BTreeMap::new();
        for (u, v, w) in g.undirected_edges() {
            let (cu, cv) = (mapping.coarse_of(u), mapping.coarse_of(v));
            if cu != cv {
                *ew.entry((cu.min(cv), cu.max(cv))).or_insert(0) += w;
            }
        }
        (nw, ew)
    }

    fn assert_matches_oracle(g: &Graph, clustering: &Labels) {
        let (coarse, mapping) = contract(g, clustering);
        let (nw, ew) = contract_oracle(g, clustering);
        assert_eq!(coarse.node_weights(), &nw[..]);
        let got: BTreeMap<(usize, usize), Weight> = coarse
            .undirected_edges()
            .map(|(u, v, w)| ((u, v), w))
            .collect();
        assert_eq!(got, ew);
        assert_eq!(mapping.n_coarse(), nw.len());
        coarse.check_invariants().unwrap();
    }

    #[test]
    fn triangles_contract_to_a_bridge() {
        let g = bridged_triangles();
        let (coarse, mapping) = contract(&g, &Labels::from_vec(vec![0, 0, 0, 1, 1, 1]));
        assert_eq!(coarse.n(), 2);
        assert_eq!(coarse.node_weights(), &[3, 3]);
        assert_eq!(coarse.undirected_edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
        assert_eq!(mapping.coarse_ids(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(mapping.q(0), Some(0));
        assert_eq!(mapping.q(1), Some(1));
        assert_eq!(mapping.q(2), None);
    }

    #[test]
    fn singleton_clustering_is_identity() {
        let g = random_graph(30, 4, 5, 3, 7);
        let (coarse, mapping) = contract(&g, &Labels::identity(30));
        assert_eq!(coarse, g);
        assert_eq!(mapping.coarse_ids(), (0..30).collect::<Vec<_>>().as_slice());
        for v in 0..30 {
            assert_eq!(mapping.q(v), Some(v));
            assert_eq!(mapping.cluster_of_coarse(v), v);
        }
    }

    #[test]
    fn cluster_ids_compact_in_ascending_order() {
        // Labels need not be contiguous; coarse ids follow sorted order.
        let g = crate::test_util::path(4);
        let (coarse, mapping) = contract(&g, &Labels::from_vec(vec![9, 2, 2, 9]));
        assert_eq!(mapping.q(2), Some(0));
        assert_eq!(mapping.q(9), Some(1));
        assert_eq!(mapping.coarse_ids(), &[1, 0, 0, 1]);
        // Edges 0-1 and 2-3 cross; 1-2 is internal.
        assert_eq!(coarse.undirected_edges().collect::<Vec<_>>(), vec![(0, 1, 2)]);
    }

    #[test]
    fn random_clustering_matches_brute_force_aggregation() {
        let g = random_graph(50, 5, 4, 3, 13);
        let mut rng = SplitMix64::new(99);
        let clustering =
            Labels::from_vec((0..50).map(|_| rng.next_below(7) as usize).collect());
        assert_matches_oracle(&g, &clustering);
    }

    #[test]
    fn projection_examples() {
        let g = bridged_triangles();
        let (_, mapping) = contract(&g, &Labels::from_vec(vec![0, 0, 0, 1, 1, 1]));
        assert_eq!(
            mapping.project(&Labels::from_vec(vec![0, 1])).as_slice(),
            &[0, 0, 0, 1, 1, 1]
        );
        let (_, identity) = contract(&g, &Labels::identity(6));
        let x = Labels::from_vec(vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(identity.project(&x), x);
    }

    #[test]
    fn projection_preserves_cut_exhaustively() {
        // Every bipartition of the coarse graph projects to the same cut
        // and block weights on the fine graph.
        let g = random_graph(40, 5, 4, 3, 17);
        let mut rng = SplitMix64::new(5);
        let clustering =
            Labels::from_vec((0..40).map(|_| rng.next_below(9) as usize).collect());
        let (coarse, mapping) = contract(&g, &clustering);
        let nc = coarse.n();
        assert!(nc <= 12, "want exhaustive enumeration, got {nc} coarse nodes");
        for bits in 0..(1u32 << nc) {
            let x = Labels::from_vec((0..nc).map(|i| ((bits >> i) & 1) as usize).collect());
            let up = evaluate(&coarse, &x, 2).unwrap();
            let down = evaluate(&g, &mapping.project(&x), 2).unwrap();
            assert_eq!(up.cut, down.cut);
            assert_eq!(up.block_weights, down.block_weights);
        }
    }

    #[test]
    fn weight_conservation() {
        let g = random_graph(60, 6, 5, 4, 23);
        let mut rng = SplitMix64::new(8);
        let clustering =
            Labels::from_vec((0..60).map(|_| rng.next_below(11) as usize).collect());
        let (coarse, mapping) = contract(&g, &clustering);
        assert_eq!(coarse.total_node_weight(), g.total_node_weight());
        let intra: u64 = g
            .undirected_edges()
            .filter(|&(u, v, _)| mapping.coarse_of(u) == mapping.coarse_of(v))
            .map(|(_, _, w)| w)
            .sum();
        assert_eq!(coarse.total_edge_weight(), g.total_edge_weight() - intra);
    }

    #[test]
    fn coarse_weights_respect_the_clustering_bound() {
        use crate::lp::{run_lp, LpMode, LpPolicy, OrderingKind, VecBlockWeights};
        let g = random_graph(100, 6, 3, 2, 31);
        let bound = g.max_node_weight().max(g.total_node_weight() / 10);
        let mut clustering = Labels::identity(100);
        let mut weights = VecBlockWeights::singletons(&g);
        let mode = LpMode {
            policy: LpPolicy::Cluster { bound },
            restriction: None,
            rounds: 3,
            ordering: OrderingKind::DegreeIncreasing,
        };
        run_lp(&g, &mut clustering, &mode, &mut weights, 42);
        let (coarse, _) = contract(&g, &clustering);
        assert!(coarse.n() < g.n(), "clustering did not shrink the graph");
        for i in 0..coarse.n() {
            assert!(coarse.node_weight(i) <= bound);
        }
    }

    #[test]
    fn contract_edge_structure_agrees_with_quotient() {
        // The label quotient ignores node weights but must agree on edges.
        let g = random_graph(45, 5, 3, 2, 37);
        let mut rng = SplitMix64::new(3);
        let clustering =
            Labels::from_vec((0..45).map(|_| rng.next_below(8) as usize).collect());
        let (coarse, _) = contract(&g, &clustering);
        let quotient = quotient_graph(&g, &clustering).unwrap();
        assert_eq!(
            coarse.undirected_edges().collect::<Vec<_>>(),
            quotient.undirected_edges().collect::<Vec<_>>()
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_case() -> impl Strategy<Value = (u64, usize, u64)> {
            (any::<u64>(), 2usize..20, any::<u64>())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn contraction_matches_oracle((gseed, nclusters, cseed) in arb_case()) {
                let g = random_graph(40, 5, 4, 3, gseed);
                let mut rng = SplitMix64::new(cseed);
                let clustering = Labels::from_vec(
                    (0..40).map(|_| rng.next_below(nclusters as u64) as usize).collect());
                assert_matches_oracle(&g, &clustering);
            }

            #[test]
            fn projection_preserves_cut_and_weights((gseed, nclusters, cseed) in arb_case()) {
                let g = random_graph(40, 5, 4, 3, gseed);
                let mut rng = SplitMix64::new(cseed);
                let clustering = Labels::from_vec(
                    (0..40).map(|_| rng.next_below(nclusters as u64) as usize).collect());
                let (coarse, mapping) = contract(&g, &clustering);
                let k = 4;
                let x = Labels::from_vec(
                    (0..coarse.n()).map(|_| rng.next_below(k as u64) as usize).collect());
                let up = evaluate(&coarse, &x, k).unwrap();
                let down = evaluate(&g, &mapping.project(&x), k).unwrap();
                prop_assert_eq!(up.cut, down.cut);
                prop_assert_eq!(up.block_weights, down.block_weights);
            }

            #[test]
            fn double_contraction_composes((gseed, nclusters, cseed) in arb_case()) {
                // Contracting twice equals contracting the composed clustering.
                let g = random_graph(40, 5, 4, 3, gseed);
                let mut rng = SplitMix64::new(cseed);
                let c1 = Labels::from_vec(
                    (0..40).map(|_| rng.next_below(nclusters as u64) as usize).collect());
                let (mid, m1) = contract(&g, &c1);
                let c2 = Labels::from_vec(
                    (0..mid.n()).map(|_| rng.next_below(5) as usize).collect());
                let (top, _) = contract(&mid, &c2);
                let composed = Labels::from_vec(
                    (0..40).map(|v| c2.get(m1.coarse_of(v))).collect());
                let (direct, _) = contract(&g, &composed);
                prop_assert_eq!(top, direct);
            }
        }
    }
}
