//! Plain-text graph files.
//!
//! ```text
//! # K4 with a doubled (1,4) edge
//! 4
//! 1 2
//! 1 4 2
//! ```
//!
//! The header is the last vertex label (`n+1`, vertices `1..=n+1`) or the
//! pair `0 n+1` for graphs carrying a source vertex. Each following line is
//! `tail head [multiplicity]`. Text after `#` is ignored.

use super::{DirectedMultigraph, Edge, Vertex};
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<DirectedMultigraph> {
    let mut header: Option<(Vertex, usize)> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields = line
            .split_whitespace()
            .map(|f| {
                f.parse::<i64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not an integer: {f:?}"),
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match header {
            None => {
                header = Some(match fields[..] {
                    [last] if last >= 1 => (1, last as usize),
                    [0, last] if last >= 1 => (0, last as usize + 1),
                    _ => {
                        return Err(parse_err(
                            "header must be `n+1` or `0 n+1` with n+1 >= 1".into(),
                        ))
                    }
                });
            }
            Some((first, count)) => {
                let (tail, head, mult) = match fields[..] {
                    [t, h] => (t, h, 1),
                    [t, h, m] => (t, h, m),
                    _ => return Err(parse_err("expected `tail head [multiplicity]`".into())),
                };
                let last = first as i64 + count as i64 - 1;
                if tail < first as i64 || head > last || tail >= head {
                    return Err(parse_err(format!(
                        "edge ({tail}, {head}) must satisfy {first} <= tail < head <= {last}"
                    )));
                }
                if mult < 1 {
                    return Err(parse_err(format!("multiplicity must be positive, got {mult}")));
                }
                let e = Edge::new(tail as Vertex, head as Vertex);
                edges.extend(std::iter::repeat_n(e, mult as usize));
            }
        }
    }
    let (first, count) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing header line".into(),
    })?;
    DirectedMultigraph::new(first, count, edges)
}

/// Writes a graph in the format read by [`parse_graph`]; consecutive equal
/// edges collapse into one line with a multiplicity.
pub fn write_graph(g: &DirectedMultigraph) -> String {
    let mut out = if g.first() == 0 {
        format!("0 {}\n", g.last())
    } else {
        format!("{}\n", g.last())
    };
    let edges = g.edges();
    let mut k = 0;
    while k < edges.len() {
        let mut run = 1;
        while k + run < edges.len() && edges[k + run] == edges[k] {
            run += 1;
        }
        let e = edges[k];
        if run == 1 {
            out.push_str(&format!("{} {}\n", e.tail, e.head));
        } else {
            out.push_str(&format!("{} {} {}\n", e.tail, e.head, run));
        }
        k += run;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::attach_source;

    #[test]
    fn parses_with_comments_and_multiplicity() {
        let g = parse_graph("# K4 plus\n4   # header\n1 2\n\n1 4 2\n2 3\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.edge(1), Edge::new(1, 4));
        assert_eq!(g.edge(2), Edge::new(1, 4));
    }

    #[test]
    fn source_header() {
        let k4 = DirectedMultigraph::complete(4);
        let gc = attach_source(&k4, &[3, 2, 2]).unwrap();
        let text = write_graph(&gc);
        assert!(text.starts_with("0 4\n0 1 3\n0 2 2\n"));
        assert_eq!(parse_graph(&text).unwrap(), gc);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_graph("3\n1 2\n2 1\n"),
            Err(Error::Parse {
                line: 3,
                message: "edge (2, 1) must satisfy 1 <= tail < head <= 3".into()
            })
        );
        assert!(matches!(parse_graph("3\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3\n1 2 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn write_is_a_fixed_point() {
        let text = "4\n1 2\n1 4 2\n2 4\n1 4\n";
        let once = write_graph(&parse_graph(text).unwrap());
        assert_eq!(once, text);
        assert_eq!(write_graph(&parse_graph(&once).unwrap()), once);
    }
}
