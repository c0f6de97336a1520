//! The two interchange formats: METIS graph files and flat partition files.
//!
//! A graph file starts with a header `n m [fmt [ncon]]` and continues with one
//! line per node listing its neighbors by 1-based ID. `fmt` is a two-digit
//! flag pair: the tens digit marks per-node weights (prepended to each node
//! line), the ones digit per-edge weights (appended after each neighbor).
//! Lines starting with `%` are comments; blank node lines are isolated nodes.
//!
//! A partition file has one line per node: the 0-based block ID of node i on
//! line i.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::IoError;
use crate::graph::{Graph, Labels};
use crate::{BlockId, NodeId, Weight};

pub fn read_metis(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    read_metis_str(&fs::read_to_string(path)?)
}

pub fn read_metis_str(input: &str) -> Result<Graph, IoError> {
    // Line numbers refer to the original file, so comments are dropped after
    // numbering. Blank lines survive: each is a node without neighbors.
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| !line.trim_start().starts_with('%'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| IoError::parse(1, "empty file, expected a `n m [fmt]` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 4 {
        return Err(IoError::parse(
            header_line,
            format!("header must be `n m [fmt [ncon]]`, found {} fields", fields.len()),
        ));
    }
    let n: usize = parse_count(header_line, fields[0], "node count")?;
    let m: usize = parse_count(header_line, fields[1], "edge count")?;
    let fmt: u32 = if fields.len() >= 3 {
        parse_count(header_line, fields[2], "fmt code")? as u32
    } else {
        0
    };
    let (has_node_weights, has_edge_weights) = match fmt {
        0 => (false, false),
        1 => (false, true),
        10 => (true, false),
        11 => (true, true),
        other => {
            return Err(IoError::parse(
                header_line,
                format!("unsupported fmt code {other}, expected 0, 1, 10 or 11"),
            ))
        }
    };
    if fields.len() == 4 && fields[3] != "1" {
        return Err(IoError::parse(
            header_line,
            format!("unsupported ncon {}, only one node weight per node", fields[3]),
        ));
    }

    let data: Vec<(usize, &str)> = lines.collect();
    if data.len() < n {
        let end = input.lines().count();
        return Err(IoError::parse(
            end.max(1),
            format!("expected {n} node lines, file ends after {}", data.len()),
        ));
    }
    for &(no, line) in &data[n..] {
        if !line.trim().is_empty() {
            return Err(IoError::parse(no, "unexpected content after the last node line"));
        }
    }

    let mut node_weights: Vec<Weight> = vec![1; n];
    let mut adj: Vec<Vec<(NodeId, Weight)>> = vec![Vec::new(); n];
    let mut line_of: Vec<usize> = vec![header_line; n];
    for v in 0..n {
        let (no, line) = data[v];
        line_of[v] = no;
        let mut tokens = line.split_whitespace();
        if has_node_weights {
            let token = tokens
                .next()
                .ok_or_else(|| IoError::parse(no, format!("missing weight for node {}", v + 1)))?;
            node_weights[v] = parse_weight(no, token, "node weight")?;
        }
        let rest: Vec<&str> = tokens.collect();
        if has_edge_weights && rest.len() % 2 != 0 {
            return Err(IoError::parse(
                no,
                format!("node {} lists a neighbor without an edge weight", v + 1),
            ));
        }
        let stride = if has_edge_weights { 2 } else { 1 };
        for pair in rest.chunks(stride) {
            let u = parse_neighbor(no, pair[0], n)?;
            let w = if has_edge_weights {
                parse_weight(no, pair[1], "edge weight")?
            } else {
                1
            };
            if u == v + 1 {
                return Err(IoError::parse(no, format!("self loop on node {u}")));
            }
            adj[v].push((u - 1, w));
        }
        adj[v].sort_unstable();
        for window in adj[v].windows(2) {
            if window[0].0 == window[1].0 {
                return Err(IoError::parse(
                    no,
                    format!("node {} lists neighbor {} twice", v + 1, window[0].0 + 1),
                ));
            }
        }
    }

    // Symmetry before the edge count: lists are per-node sorted and free of
    // duplicates, so a missing or differently weighted reverse entry is the
    // only way counts can disagree in a well-formed file.
    for v in 0..n {
        for &(u, w) in &adj[v] {
            let back = adj[u]
                .binary_search_by_key(&v, |&(id, _)| id)
                .ok()
                .map(|slot| adj[u][slot].1);
            match back {
                Some(back_w) if back_w == w => {}
                Some(back_w) => {
                    return Err(IoError::parse(
                        line_of[v],
                        format!(
                            "edge ({}, {}) has weight {w} here but {back_w} on node {}'s line",
                            v + 1,
                            u + 1,
                            u + 1
                        ),
                    ))
                }
                None => {
                    return Err(IoError::parse(
                        line_of[v],
                        format!(
                            "node {} lists neighbor {}, but node {} does not list {} back",
                            v + 1,
                            u + 1,
                            u + 1,
                            v + 1
                        ),
                    ))
                }
            }
        }
    }
    let entries: usize = adj.iter().map(Vec::len).sum();
    if entries != 2 * m {
        return Err(IoError::parse(
            header_line,
            format!("header claims {m} edges, adjacency lists describe {}", entries / 2),
        ));
    }

    Ok(Graph::from_adjacency(node_weights, adj)?)
}

pub fn write_metis(g: &Graph, path: impl AsRef<Path>) -> Result<(), IoError> {
    Ok(fs::write(path, write_metis_string(g))?)
}

/// Renders with the smallest fmt code that loses nothing: weight columns
/// appear only when some weight differs from 1.
pub fn write_metis_string(g: &Graph) -> String {
    let node_weights = (0..g.n()).any(|v| g.node_weight(v) != 1);
    let edge_weights = g.undirected_edges().any(|(_, _, w)| w != 1);
    let fmt = 10 * u32::from(node_weights) + u32::from(edge_weights);
    let mut out = String::new();
    if fmt == 0 {
        writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    } else {
        writeln!(out, "{} {} {fmt}", g.n(), g.m()).unwrap();
    }
    for v in 0..g.n() {
        let mut sep = "";
        if node_weights {
            write!(out, "{}", g.node_weight(v)).unwrap();
            sep = " ";
        }
        for (u, w) in g.neighbors(v) {
            write!(out, "{sep}{}", u + 1).unwrap();
            if edge_weights {
                write!(out, " {w}").unwrap();
            }
            sep = " ";
        }
        out.push('\n');
    }
    out
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<Labels, IoError> {
    read_partition_str(&fs::read_to_string(path)?)
}

pub fn read_partition_str(input: &str) -> Result<Labels, IoError> {
    let mut labels: Vec<BlockId> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let token = line.trim();
        labels.push(token.parse().map_err(|_| {
            IoError::parse(i + 1, format!("expected a block ID, found {token:?}"))
        })?);
    }
    Ok(Labels::from_vec(labels))
}

pub fn write_partition(labels: &Labels, path: impl AsRef<Path>) -> Result<(), IoError> {
    Ok(fs::write(path, write_partition_string(labels))?)
}

pub fn write_partition_string(labels: &Labels) -> String {
    let mut out = String::new();
    for v in 0..labels.len() {
        writeln!(out, "{}", labels.get(v)).unwrap();
    }
    out
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, IoError> {
    token
        .parse()
        .map_err(|_| IoError::parse(line, format!("{what} must be a non-negative integer, found {token:?}")))
}

fn parse_neighbor(line: usize, token: &str, n: usize) -> Result<usize, IoError> {
    let id: usize = token
        .parse()
        .map_err(|_| IoError::parse(line, format!("expected a neighbor ID, found {token:?}")))?;
    if id == 0 || id > n {
        return Err(IoError::parse(line, format!("neighbor {id} outside 1..={n}")));
    }
    Ok(id)
}

fn parse_weight(line: usize, token: &str, what: &str) -> Result<Weight, IoError> {
    let w: Weight = token
        .parse()
        .map_err(|_| IoError::parse(line, format!("{what} must be a positive integer, found {token:?}")))?;
    if w == 0 {
        return Err(IoError::parse(line, format!("{what} must be positive")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::random_graph;

    fn parse_err(result: Result<Graph, IoError>) -> (usize, String) {
        match result {
            Err(IoError::Parse { line, msg }) => (line, msg),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    fn edge_set(g: &Graph) -> Vec<(usize, usize, Weight)> {
        let mut edges: Vec<_> = g.undirected_edges().collect();
        edges.sort_unstable();
        edges
    }

    #[test]
    fn triangle_example_parses() {
        let g = read_metis_str("3 3\n2 3\n1 3\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(edge_set(&g), vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
        assert!((0..3).all(|v| g.node_weight(v) == 1));
    }

    #[test]
    fn comments_and_isolated_nodes_parse() {
        let g = read_metis_str("% a comment\n4 1\n% another\n2\n1\n\n\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 1);
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.degree(3), 0);
        assert_eq!(edge_set(&g), vec![(0, 1, 1)]);
    }

    #[test]
    fn all_four_weight_layouts_round_trip() {
        let unit = Graph::from_edges(3, None, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let edge_w = Graph::from_edges(3, None, [(0, 1, 5), (1, 2, 1)]).unwrap();
        let node_w = Graph::from_edges(3, Some(vec![2, 1, 1]), [(0, 1, 1), (1, 2, 1)]).unwrap();
        let both = Graph::from_edges(3, Some(vec![2, 1, 1]), [(0, 1, 5), (1, 2, 1)]).unwrap();
        for (g, fmt) in [(unit, ""), (edge_w, " 1"), (node_w, " 10"), (both, " 11")] {
            let text = write_metis_string(&g);
            assert!(
                text.starts_with(&format!("3 2{fmt}\n")),
                "unexpected header in {text:?}"
            );
            let back = read_metis_str(&text).unwrap();
            assert_eq!(edge_set(&back), edge_set(&g));
            assert_eq!(
                (0..3).map(|v| back.node_weight(v)).collect::<Vec<_>>(),
                (0..3).map(|v| g.node_weight(v)).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn write_then_parse_is_stable_on_random_graphs() {
        for seed in 0..20 {
            let g = random_graph(40, 5, 4, 3, seed);
            let once = write_metis_string(&g);
            let back = read_metis_str(&once).unwrap();
            assert_eq!(write_metis_string(&back), once);
            assert_eq!(edge_set(&back), edge_set(&g));
        }
    }

    #[test]
    fn edge_count_must_match_the_header() {
        let (line, msg) = parse_err(read_metis_str("3 2\n2 3\n1 3\n1 2\n"));
        assert_eq!(line, 1);
        assert!(msg.contains("header claims 2"), "{msg}");
        assert!(msg.contains('3'), "{msg}");
    }

    #[test]
    fn asymmetry_is_reported_with_its_line() {
        let (line, msg) = parse_err(read_metis_str("2 1\n2\n\n"));
        assert_eq!(line, 2);
        assert!(msg.contains("does not list"), "{msg}");

        let (line, msg) = parse_err(read_metis_str("2 1 1\n2 4\n1 3\n"));
        assert_eq!(line, 2);
        assert!(msg.contains("weight 4"), "{msg}");
    }

    #[test]
    fn weights_must_be_positive() {
        let (line, _) = parse_err(read_metis_str("2 1 10\n0 2\n1 1\n"));
        assert_eq!(line, 2);
        let (line, _) = parse_err(read_metis_str("2 1 1\n2 0\n1 0\n"));
        assert_eq!(line, 2);
    }

    #[test]
    fn malformed_node_lines_are_rejected() {
        // Neighbor IDs are 1-based and bounded by n.
        let (line, _) = parse_err(read_metis_str("2 1\n2\n0\n"));
        assert_eq!(line, 3);
        let (line, _) = parse_err(read_metis_str("2 1\n2\n5\n"));
        assert_eq!(line, 3);
        let (line, msg) = parse_err(read_metis_str("2 1\n2\n1 1\n"));
        assert_eq!(line, 3);
        assert!(msg.contains("twice"), "{msg}");
        let (line, msg) = parse_err(read_metis_str("1 0\n1\n"));
        assert_eq!(line, 2);
        assert!(msg.contains("self loop"), "{msg}");
        let (line, msg) = parse_err(read_metis_str("2 1 1\n2\n1 1\n"));
        assert_eq!(line, 2);
        assert!(msg.contains("without an edge weight"), "{msg}");
    }

    #[test]
    fn bad_headers_are_rejected() {
        assert!(matches!(read_metis_str(""), Err(IoError::Parse { line: 1, .. })));
        let (line, _) = parse_err(read_metis_str("3\n"));
        assert_eq!(line, 1);
        let (line, _) = parse_err(read_metis_str("abc 3\n\n\n\n"));
        assert_eq!(line, 1);
        let (line, msg) = parse_err(read_metis_str("2 0 2\n\n\n"));
        assert_eq!(line, 1);
        assert!(msg.contains("fmt"), "{msg}");
        let (line, msg) = parse_err(read_metis_str("2 0 11 2\n1 \n1\n"));
        assert_eq!(line, 1);
        assert!(msg.contains("ncon"), "{msg}");
        let (line, msg) = parse_err(read_metis_str("3 0\n\n"));
        assert_eq!(line, 2);
        assert!(msg.contains("ends after 1"), "{msg}");
        let (line, _) = parse_err(read_metis_str("1 0\n\nstray\n"));
        assert_eq!(line, 3);
    }

    #[test]
    fn partition_files_round_trip() {
        let labels = Labels::from_vec(vec![0, 2, 1, 1, 0]);
        let text = write_partition_string(&labels);
        assert_eq!(text, "0\n2\n1\n1\n0\n");
        assert_eq!(read_partition_str(&text).unwrap().as_slice(), labels.as_slice());
        assert!(read_partition_str("").unwrap().as_slice().is_empty());

        match read_partition_str("0\nx\n1\n") {
            Err(IoError::Parse { line: 2, .. }) => {}
            other => panic!("expected a parse error on line 2, got {other:?}"),
        }
    }
}
