//! Shared fixtures for unit tests.

use crate::graph::Graph;
use crate::rng::SplitMix64;
use crate::Weight;

/// Two triangles {0,1,2} and {3,4,5} joined by the edge (2,3).
pub fn bridged_triangles() -> Graph {
    Graph::from_edges(
        6,
        None,
        vec![
            (0, 1, 1),
            (0, 2, 1),
            (1, 2, 1),
            (3, 4, 1),
            (3, 5, 1),
            (4, 5, 1),
            (2, 3, 1),
        ],
    )
    .unwrap()
}

/// Path 0 - 1 - ... - (n-1), unit weights.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, None, (0..n - 1).map(|i| (i, i + 1, 1))).unwrap()
}

/// Connected random multigraph-ish generator: `n*avg_deg/2` random pairs plus
/// a ring, random edge weights in `1..=wmax` and node weights in `1..=nwmax`.
pub fn random_graph(n: usize, avg_deg: usize, wmax: Weight, nwmax: Weight, seed: u64) -> Graph {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    let target = n * avg_deg / 2;
    while edges.len() < target {
        let u = rng.next_below(n as u64) as usize;
        let v = rng.next_below(n as u64) as usize;
        if u != v {
            edges.push((u, v, rng.next_range(1, wmax)));
        }
    }
    for i in 0..n {
        edges.push((i, (i + 1) % n, 1));
    }
    let weights = (0..n).map(|_| rng.next_range(1, nwmax)).collect();
    Graph::from_edges(n, Some(weights), edges).unwrap()
}
