//! Simple undirected graphs and the network families used in the
//! experiments.

mod generate;
mod io;

pub use generate::{generate, Family, GeneratorSpec};
pub use io::{format_edges, parse_edges, read_edges, write_edges, EdgeList};

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Simple undirected graph on vertices `0..n`, stored as a symmetric,
/// zero-diagonal adjacency bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitMatrix,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(n),
        }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            adj: BitMatrix::from_fn(n, |r, c| r != c),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u, v, n));
            }
            if u != v {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Symmetric closure of a list of directed arcs. Self-arcs are dropped
    /// and arcs in both directions collapse into one edge.
    pub fn undirect(arcs: &[(usize, usize)], n: usize) -> Result<Self> {
        Graph::from_edges(n, arcs)
    }

    pub fn order(&self) -> usize {
        self.adj.side()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones() / 2
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loops are not allowed");
        self.adj.set(u, v, true);
        self.adj.set(v, u, true);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj.set(u, v, false);
        self.adj.set(v, u, false);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row_ones(v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.order()).filter(move |&u| self.adj.get(v, u))
    }

    /// Adjacency lists in increasing vertex order.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.order()).map(|v| self.neighbors(v).collect()).collect()
    }

    /// Edges (u, v) with u < v in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..n {
            for v in u + 1..n {
                if self.adj.get(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Self {
        let n = self.order();
        Graph {
            adj: BitMatrix::from_fn(n, |r, c| r != c && !self.adj.get(r, c)),
        }
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.order())?;
        Ok(Graph {
            adj: self.adj.permuted(perm),
        })
    }

    /// Graph whose vertex `i` is vertex `order[i]` of `self`: the adjacency
    /// matrix with rows and columns listed in `order`.
    pub fn reorder(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.order())?;
        let n = self.order();
        Ok(Graph {
            adj: BitMatrix::from_fn(n, |r, c| self.adj.get(order[r], order[c])),
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Permutation(format!("length {} for {n} vertices", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Permutation(format!("{perm:?} is not a bijection on 0..{n}")));
        }
    }
    Ok(())
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}
