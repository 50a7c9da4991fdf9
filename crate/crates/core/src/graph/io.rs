use std::fmt::Write as _;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Parsed edge-list file before conversion to a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub directed: bool,
    pub vertices: Option<usize>,
    pub pairs: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn into_graph(self) -> Result<Graph> {
        let implied = self.pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = self.vertices.unwrap_or(implied);
        if self.directed {
            Graph::undirect(&self.pairs, n)
        } else {
            Graph::from_edges(n, &self.pairs)
        }
    }
}

/// Parses whitespace-separated vertex pairs. `#` starts a comment; the
/// keyword lines `directed`, `undirected` and `vertices N` are recognized
/// anywhere before the first pair. Without `vertices`, the vertex count is
/// one more than the largest id.
pub fn parse_edges(text: &str, origin: &str) -> Result<EdgeList> {
    let mut list = EdgeList {
        directed: false,
        vertices: None,
        pairs: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            ["directed"] if list.pairs.is_empty() => list.directed = true,
            ["undirected"] if list.pairs.is_empty() => list.directed = false,
            ["vertices", n] if list.pairs.is_empty() => {
                let n = n
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad vertex count {n:?}")))?;
                list.vertices = Some(n);
            }
            [a, b] => {
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::parse(origin, lineno, format!("bad vertex id {s:?}")))
                };
                list.pairs.push((parse(a)?, parse(b)?));
            }
            _ => {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected a vertex pair, got {line:?}"),
                ))
            }
        }
    }
    if let Some(n) = list.vertices {
        if let Some(&(u, v)) = list.pairs.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::VertexOutOfRange(u, v, n));
        }
    }
    Ok(list)
}

pub fn read_edges(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edges(&text, &path.display().to_string())?.into_graph()
}

pub fn format_edges(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_edges(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_edges(g)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec};

    #[test]
    fn path_of_three() {
        let g = parse_edges("0 1\n1 2", "t").unwrap().into_graph().unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn directed_header_collapses_arcs() {
        let both = parse_edges("directed\n0 1\n1 0\n", "t").unwrap().into_graph().unwrap();
        let one = parse_edges("0 1\n", "t").unwrap().into_graph().unwrap();
        assert_eq!(both, one);
    }

    #[test]
    fn comments_and_isolated_vertices() {
        let g = parse_edges("# a comment\nvertices 5\n0 1 # trailing\n", "t")
            .unwrap()
            .into_graph()
            .unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn malformed_lines_name_the_line() {
        let e = parse_edges("0 1\n1 x\n", "f.edges").unwrap_err();
        assert!(e.to_string().starts_with("f.edges:2:"), "{e}");
        let e = parse_edges("0 1 2\n", "f.edges").unwrap_err();
        assert!(e.to_string().contains(":1:"), "{e}");
        assert!(parse_edges("vertices 2\n0 3\n", "f").is_err());
    }

    #[test]
    fn round_trip_er() {
        let g = generate(&GeneratorSpec::new(Family::ErGnp { n: 40, p: 0.2 }, 17)).unwrap();
        let back = parse_edges(&format_edges(&g), "t").unwrap().into_graph().unwrap();
        assert_eq!(back, g);
    }
}
