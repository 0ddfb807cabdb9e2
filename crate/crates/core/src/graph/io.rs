//! Plain-text graph formats.
//!
//! * edge list: one `u v` pair per line, `#` starts a comment;
//! * DIMACS: a `p edge n m` header, then `e u v` lines; `c` lines are comments.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{Graph, GraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
    Dimacs,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "edge-list" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_id(token: &str, line: usize) -> Result<VertexId, ParseError> {
    token
        .parse::<VertexId>()
        .map_err(|_| malformed(line, format!("`{token}` is not a vertex id")))
}

fn add(g: &mut Graph, u: VertexId, v: VertexId, line: usize) -> Result<(), ParseError> {
    g.add_edge(u, v).map(|_| ()).map_err(|e| match e {
        GraphError::SelfLoop(vertex) => ParseError::SelfLoop { line, vertex },
        other => malformed(line, other.to_string()),
    })
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens[..] else {
            return Err(malformed(line, "expected `u v`"));
        };
        add(&mut g, parse_id(u, line)?, parse_id(v, line)?, line)?;
    }
    Ok(g)
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    let mut declared: Option<VertexId> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if declared.is_some() {
                    return Err(malformed(line, "duplicate `p` header"));
                }
                let [_, _, n, m] = tokens[..] else {
                    return Err(malformed(line, "expected `p edge n m`"));
                };
                let n = parse_id(n, line)?;
                m.parse::<usize>()
                    .map_err(|_| malformed(line, format!("`{m}` is not an edge count")))?;
                for v in 1..=n {
                    g.add_vertex(v);
                }
                declared = Some(n);
            }
            Some("e") => {
                let Some(n) = declared else {
                    return Err(malformed(line, "edge before `p` header"));
                };
                let [_, u, v] = tokens[..] else {
                    return Err(malformed(line, "expected `e u v`"));
                };
                let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(malformed(line, format!("vertex {x} outside 1..={n}")));
                    }
                }
                add(&mut g, u, v, line)?;
            }
            Some(other) => return Err(malformed(line, format!("unknown line type `{other}`"))),
        }
    }
    if declared.is_none() {
        return Err(malformed(1, "missing `p edge n m` header"));
    }
    Ok(g)
}

/// Canonical edge-list rendering, one edge per line in lexicographic order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi()).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn edge_list_k3() {
        let g = parse_graph("1 2\n2 3\n1 3", GraphFormat::EdgeList).unwrap();
        assert_eq!(g, Graph::from_edges([(1, 2), (2, 3), (1, 3)]).unwrap());
    }

    #[test]
    fn dimacs_k3() {
        let text = "c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_graph(text, GraphFormat::Dimacs).unwrap();
        assert_eq!(g, Graph::from_edges([(1, 2), (2, 3), (1, 3)]).unwrap());
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            parse_graph("1 1", GraphFormat::EdgeList),
            Err(ParseError::SelfLoop { line: 1, vertex: 1 })
        );
    }

    #[test]
    fn duplicates_collapse_and_comments_skip() {
        let g = parse_graph("# header\n1 2\n2 1 # again\n\n1 2\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_graph("1 2\n3\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 2, .. }));
        let err = parse_graph("1 x\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 1, .. }));
        let err = parse_graph("p edge 2 1\ne 1 3\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 2, .. }));
        let err = parse_graph("e 1 2\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 1, .. }));
    }

    #[test]
    fn dimacs_keeps_isolated_declared_vertices() {
        let g = parse_graph("p edge 4 1\ne 1 2\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn edge_list_round_trips() {
        let g = Graph::complete(5);
        let text = write_edge_list(&g);
        assert_eq!(parse_graph(&text, GraphFormat::EdgeList).unwrap(), g);
    }
}
