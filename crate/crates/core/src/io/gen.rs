//! Seeded graph generators. Both are deterministic functions of their seed on
//! every platform: coordinates come from one SplitMix64 stream, planted edges
//! from a stateless per-pair hash, with no float comparisons whose outcome
//! could vary between targets.

use crate::graph::{Graph, Labels};
use crate::rng::{mix, SplitMix64};
use crate::{NodeId, Weight};

const RGG_STREAM: u64 = 0x726767; // "rgg"
const PLANTED_STREAM: u64 = 0x706c74; // "plt"

/// Connection radius for a random geometric graph on `n` unit-square points,
/// chosen so the expected average degree grows with log n and the graph is
/// connected with high probability.
pub fn rgg_radius(n: usize) -> f64 {
    0.55 * ((n as f64).ln() / n as f64).sqrt()
}

/// Random geometric graph: `2^x` seeded-uniform points in the unit square,
/// an edge wherever the Euclidean distance is strictly below
/// [`rgg_radius`], unit weights.
pub fn gen_rgg(x: u32, seed: u64) -> Graph {
    assert!(x >= 4, "rgg exponent below desk scale: {x}");
    let points = rgg_points(x, seed);
    let edges = rgg_edges(&points, rgg_radius(points.len()));
    Graph::from_edges(points.len(), None, edges.into_iter().map(|(u, v)| (u, v, 1)))
        .expect("each edge is emitted once between distinct nodes")
}

pub(crate) fn rgg_points(x: u32, seed: u64) -> Vec<(f64, f64)> {
    let n = 1usize << x;
    let mut rng = SplitMix64::new(mix(&[seed, RGG_STREAM]));
    (0..n)
        .map(|_| {
            let px = rng.next_f64();
            let py = rng.next_f64();
            (px, py)
        })
        .collect()
}

/// All pairs closer than `radius`, via grid bucketing: cells have side at
/// least `radius`, so every partner of a point lives in its 3x3 cell block
/// and the scan is linear in n for the radius used here.
pub(crate) fn rgg_edges(points: &[(f64, f64)], radius: f64) -> Vec<(NodeId, NodeId)> {
    let cells = (1.0 / radius).floor().max(1.0) as usize;
    let cell_of = |coord: f64| ((coord * cells as f64) as usize).min(cells - 1);
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); cells * cells];
    for (i, &(px, py)) in points.iter().enumerate() {
        buckets[cell_of(py) * cells + cell_of(px)].push(i);
    }
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for (i, &(px, py)) in points.iter().enumerate() {
        let (cx, cy) = (cell_of(px), cell_of(py));
        for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &buckets[ny * cells + nx] {
                    if j <= i {
                        continue;
                    }
                    let (dx, dy) = (px - points[j].0, py - points[j].1);
                    if dx * dx + dy * dy < r2 {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    edges
}

/// Ground-truth membership used by [`gen_planted`]: node v belongs to block
/// `v * blocks / n`, contiguous runs differing in size by at most one.
pub fn planted_labels(n: usize, blocks: usize) -> Labels {
    assert!(blocks >= 1);
    Labels::from_vec((0..n).map(|v| v * blocks / n).collect())
}

/// Planted-partition graph with unit weights: each intra-block pair is an
/// edge with probability `p_in`, each cross pair with `p_out`, decided by a
/// stateless hash of (seed, pair) so membership of one edge never depends on
/// another.
pub fn gen_planted(n: usize, blocks: usize, p_in: f64, p_out: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p_in), "p_in outside [0,1]: {p_in}");
    assert!((0.0..=1.0).contains(&p_out), "p_out outside [0,1]: {p_out}");
    let labels = planted_labels(n, blocks);
    let thr_in = probability_threshold(p_in);
    let thr_out = probability_threshold(p_out);
    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let thr = if labels.get(u) == labels.get(v) { thr_in } else { thr_out };
            if (pair_hash(seed, u, v) as u128) < thr {
                edges.push((u, v, 1));
            }
        }
    }
    Graph::from_edges(n, None, edges).expect("each edge is emitted once between distinct nodes")
}

pub(crate) fn pair_hash(seed: u64, u: NodeId, v: NodeId) -> u64 {
    mix(&[seed, PLANTED_STREAM, u as u64, v as u64])
}

/// Maps p to a threshold such that `hash < threshold` holds with probability
/// p over uniform 64-bit hashes; exact at both endpoints.
pub(crate) fn probability_threshold(p: f64) -> u128 {
    (p * 18_446_744_073_709_551_616.0).round() as u128
}
