//! Exhaustive partitioning, the ground truth for tiny instances.

use super::IoError;
use crate::graph::{compute_lmax, Fraction, Graph, Labels};
use crate::{BlockId, Weight};

/// Hard ceiling on the exhaustive search size.
pub const MAX_BRUTE_NODES: usize = 12;

/// Exact minimum cut over all assignments whose block weights fit the balance
/// bound, together with the lexicographically smallest label vector attaining
/// it.
///
/// The search walks first-occurrence canonical labelings in lex order: block
/// IDs are interchangeable, so every partition has exactly one canonical
/// labeling and it is its lex-smallest one. The first optimum found is
/// therefore the global lex-smallest, and equal-cut branches can be pruned.
pub fn brute_force_partition(
    g: &Graph,
    k: usize,
    epsilon: Fraction,
) -> Result<(Weight, Labels), IoError> {
    let n = g.n();
    if n > MAX_BRUTE_NODES {
        return Err(IoError::TooLarge {
            n,
            limit: MAX_BRUTE_NODES,
        });
    }
    let bound = compute_lmax(g.total_node_weight(), k, epsilon)?.floor_weight();
    let mut search = Search {
        g,
        k,
        bound,
        labels: vec![0; n],
        block_weight: vec![0; k],
        best: None,
    };
    search.descend(0, 0, 0);
    match search.best {
        Some((cut, labels)) => Ok((cut, Labels::from_vec(labels))),
        None => Err(IoError::Infeasible),
    }
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    bound: Weight,
    labels: Vec<BlockId>,
    block_weight: Vec<Weight>,
    best: Option<(Weight, Vec<BlockId>)>,
}

impl Search<'_> {
    /// Assigns nodes v.. given `cut` among nodes before v and `used` distinct
    /// labels so far. Weight bounds are enforced on every prefix, so reaching
    /// a leaf means the assignment is feasible.
    fn descend(&mut self, v: usize, cut: Weight, used: usize) {
        if let Some((best_cut, _)) = &self.best {
            if cut >= *best_cut {
                return;
            }
        }
        if v == self.g.n() {
            self.best = Some((cut, self.labels.clone()));
            return;
        }
        let weight = self.g.node_weight(v);
        for b in 0..=used.min(self.k - 1) {
            if self.block_weight[b] + weight > self.bound {
                continue;
            }
            let added: Weight = self
                .g
                .neighbors(v)
                .filter(|&(u, _)| u < v && self.labels[u] != b)
                .map(|(_, w)| w)
                .sum();
            self.labels[v] = b;
            self.block_weight[b] += weight;
            self.descend(v + 1, cut + added, used.max(b + 1));
            self.block_weight[b] -= weight;
        }
    }
}
