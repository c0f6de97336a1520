//! Multilevel k-way graph partitioner for complex networks.
//!
//! The partitioner splits the nodes of an undirected, weighted graph into `k`
//! blocks of bounded weight while keeping the total weight of edges running
//! between blocks small. It is built around size-constrained label
//! propagation, which serves double duty:
//!
//! * **Coarsening**: label propagation with a small cluster-size bound finds
//!   dense groups, which are contracted into single nodes until the graph is
//!   small enough to attack directly.
//! * **Refinement**: the same engine with the block-weight bound `L_max`
//!   improves a partition as it is projected back through the hierarchy.
//!
//! The coarsest graph is partitioned by a small evolutionary algorithm
//! (greedy graph growing, recombination along protected cut edges, V-cycle
//! mutation) replicated across processing elements.
//!
//! Everything runs either sequentially or on `P` simulated processing
//! elements connected by a deterministic in-process transport
//! ([`dist::Transport`]); with one PE the distributed driver reproduces the
//! sequential path label for label. All randomness flows from a single seed
//! through [`rng::SplitMix64`], so runs are reproducible across platforms.
//!
//! Node and edge weights are unsigned 64-bit integers. The balance bound
//! `L_max = (1 + eps) * ceil(c(V)/k)` is kept as an exact rational
//! ([`graph::WeightBound`]); feasibility decisions never go through floating
//! point.

pub mod coarsen;
pub mod dist;
pub mod evo;
pub mod graph;
pub mod io;
pub mod lp;
pub mod pipeline;
pub mod rng;
#[cfg(test)]
pub(crate) mod test_util;

/// Node identifier, also used for cluster labels during coarsening.
pub type NodeId = usize;
/// Partition block or cluster identifier.
pub type BlockId = usize;
/// Node and edge weight. Totals are assumed to fit in 64 bits.
pub type Weight = u64;
/// Processing element rank, `0..P`.
pub type PeId = usize;
