//! Plain-text edge-list serialization.
//!
//! Format: a header line `graph <node_count> <edge_count>`, followed by one
//! `u v` line per edge with `u < v`, in ascending lexicographic order, ASCII
//! decimal, LF line endings. Reading stops after the declared number of
//! edges; trailing content (such as an appended stats record) is ignored.
//! Writing a graph that was read back produces a byte-identical file.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn malformed(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError::Malformed {
        line,
        message: message.into(),
    }
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "graph {} {}", graph.node_count(), graph.edge_count())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn edge_list_string(graph: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(graph, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, EdgeListError> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed(1, "missing header line"))??;
    let mut parts = header.split_ascii_whitespace();
    if parts.next() != Some("graph") {
        return Err(malformed(1, "header must start with `graph`"));
    }
    let node_count: usize = parts
        .next()
        .ok_or_else(|| malformed(1, "header missing node count"))?
        .parse()
        .map_err(|e| malformed(1, format!("bad node count: {e}")))?;
    let edge_count: usize = parts
        .next()
        .ok_or_else(|| malformed(1, "header missing edge count"))?
        .parse()
        .map_err(|e| malformed(1, format!("bad edge count: {e}")))?;
    if parts.next().is_some() {
        return Err(malformed(1, "trailing tokens in header"));
    }

    let mut graph = Graph::new(node_count);
    let mut previous: Option<(NodeId, NodeId)> = None;
    for index in 0..edge_count {
        let line_no = index + 2;
        let line = lines
            .next()
            .ok_or_else(|| {
                malformed(line_no, format!("expected {edge_count} edges, file ends early"))
            })??;
        let mut parts = line.split_ascii_whitespace();
        let u: NodeId = parts
            .next()
            .ok_or_else(|| malformed(line_no, "empty edge line"))?
            .parse()
            .map_err(|e| malformed(line_no, format!("bad node id: {e}")))?;
        let v: NodeId = parts
            .next()
            .ok_or_else(|| malformed(line_no, "edge line missing second endpoint"))?
            .parse()
            .map_err(|e| malformed(line_no, format!("bad node id: {e}")))?;
        if parts.next().is_some() {
            return Err(malformed(line_no, "trailing tokens in edge line"));
        }
        if u >= v {
            return Err(malformed(line_no, format!("edge {u} {v} must satisfy u < v")));
        }
        if let Some(prev) = previous {
            if prev >= (u, v) {
                return Err(malformed(
                    line_no,
                    format!("edge {u} {v} breaks ascending order"),
                ));
            }
        }
        previous = Some((u, v));
        graph
            .add_edge(u, v)
            .map_err(|e| malformed(line_no, e.to_string()))?;
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = Graph::from_edges(5, [(0, 1), (0, 4), (1, 2), (2, 3)]).unwrap();
        let text = edge_list_string(&g);
        assert_eq!(text, "graph 5 4\n0 1\n0 4\n1 2\n2 3\n");
        let back = read_edge_list(Cursor::new(text.as_bytes())).unwrap();
        assert_eq!(back, g);
        assert_eq!(edge_list_string(&back), text);
    }

    #[test]
    fn empty_graph_round_trip() {
        let g = Graph::new(3);
        let text = edge_list_string(&g);
        assert_eq!(text, "graph 3 0\n");
        assert_eq!(read_edge_list(Cursor::new(text.as_bytes())).unwrap(), g);
    }

    #[test]
    fn trailing_content_after_edges_is_ignored() {
        let text = "graph 2 1\n0 1\n{\"stats\":true}\n";
        let g = read_edge_list(Cursor::new(text.as_bytes())).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn rejects_unordered_edges() {
        let text = "graph 3 2\n1 2\n0 1\n";
        let err = read_edge_list(Cursor::new(text.as_bytes())).unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn rejects_u_not_less_than_v() {
        let text = "graph 3 1\n2 1\n";
        assert!(read_edge_list(Cursor::new(text.as_bytes())).is_err());
    }

    #[test]
    fn rejects_truncated_file() {
        let text = "graph 3 2\n0 1\n";
        let err = read_edge_list(Cursor::new(text.as_bytes())).unwrap_err();
        assert!(err.to_string().contains("ends early"));
    }
}
