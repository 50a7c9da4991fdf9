//! Exact automorphism group order by individualization-refinement.
//!
//! The search fixes a first path `v1, v2, ...` of individualized vertices
//! down to a discrete partition. Walking that path from the bottom up, it
//! computes the orbit of `v_i` under the pointwise stabilizer of
//! `v1..v_{i-1}`: every candidate in the target cell that known generators
//! do not already reach is tested by a backtracking search for an
//! automorphism sending `v_i` to it. By orbit-stabilizer the group order is
//! the product of these orbit sizes.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutResult {
    pub order: BigUint,
    /// Vertex orbits, each sorted, listed by smallest member.
    pub orbits: Vec<Vec<usize>>,
    pub generators_found: usize,
    /// Generators as vertex maps `v -> generator[v]`.
    pub generators: Vec<Vec<usize>>,
}

impl AutResult {
    pub fn log2_order(&self) -> f64 {
        log2_big(&self.order)
    }

    /// `A(g) / n!`.
    pub fn over_factorial(&self) -> f64 {
        let n = self.orbits.iter().map(Vec::len).sum::<usize>();
        (self.log2_order() - log2_factorial(n)).exp2()
    }

    /// `log2 A(g) / n`.
    pub fn log2_per_vertex(&self) -> f64 {
        let n = self.orbits.iter().map(Vec::len).sum::<usize>();
        self.log2_order() / n as f64
    }

    pub fn summary(&self) -> AutSummary {
        let decimal = (self.log2_order() < 300.0 * std::f64::consts::LOG2_10).then(|| self.order.to_string());
        AutSummary {
            order_log2: self.log2_order(),
            order_decimal: decimal,
            orbit_count: self.orbits.len(),
            generators_found: self.generators_found,
        }
    }
}

/// JSON-facing digest of an [`AutResult`].
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AutSummary {
    pub order_log2: f64,
    /// Present when the order is below 10^300.
    pub order_decimal: Option<String>,
    pub orbit_count: usize,
    pub generators_found: usize,
}

/// Both normalizations of the group order used in the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedAut {
    pub over_factorial: f64,
    pub log2_per_vertex: f64,
}

pub fn normalized_aut(g: &Graph) -> Result<NormalizedAut> {
    let r = aut_size(g)?;
    Ok(NormalizedAut {
        over_factorial: r.over_factorial(),
        log2_per_vertex: r.log2_per_vertex(),
    })
}

pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

pub fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AutOptions {
    /// Abort with an error once this instant passes.
    pub deadline: Option<Instant>,
}

/// Ordered partition of the vertex set.
#[derive(Clone, Debug)]
struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition {
            cells: vec![(0..n).collect()],
        }
    }

    fn is_discrete(&self, n: usize) -> bool {
        self.cells.len() == n
    }

    fn cell_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![0; n];
        for (i, c) in self.cells.iter().enumerate() {
            for &v in c {
                of[v] = i;
            }
        }
        of
    }

    /// First smallest non-singleton cell.
    fn target(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }

    fn individualize(&self, cell: usize, v: usize) -> Partition {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        for (i, c) in self.cells.iter().enumerate() {
            if i == cell {
                cells.push(vec![v]);
                cells.push(c.iter().copied().filter(|&u| u != v).collect());
            } else {
                cells.push(c.clone());
            }
        }
        Partition { cells }
    }
}

struct Searcher<'a> {
    g: &'a Graph,
    adj: Vec<Vec<usize>>,
    n: usize,
    deadline: Option<Instant>,
}

/// Per-cell neighbour counts into every other cell; equal for isomorphic
/// positions in the search tree.
type Shape = Vec<(usize, Vec<(usize, usize)>)>;

impl<'a> Searcher<'a> {
    fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Stats("automorphism search exceeded its time budget".into())),
            _ => Ok(()),
        }
    }

    /// Colour refinement to the coarsest equitable partition finer than `p`.
    /// Cells split by sorted neighbour-count signatures, so the result is
    /// equivariant under relabelling.
    fn refine(&self, mut p: Partition) -> Partition {
        loop {
            let of = p.cell_of(self.n);
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(p.cells.len());
            for cell in &p.cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, usize)>, usize)> =
                    cell.iter().map(|&v| (self.signature(v, &of), v)).collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            let done = next.len() == p.cells.len();
            p.cells = next;
            if done {
                return p;
            }
        }
    }

    fn signature(&self, v: usize, of: &[usize]) -> Vec<(usize, usize)> {
        let mut cells: Vec<usize> = self.adj[v].iter().map(|&u| of[u]).collect();
        cells.sort_unstable();
        let mut sig: Vec<(usize, usize)> = Vec::new();
        for c in cells {
            match sig.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => sig.push((c, 1)),
            }
        }
        sig
    }

    fn shape(&self, p: &Partition) -> Shape {
        let of = p.cell_of(self.n);
        p.cells.iter().map(|c| (c.len(), self.signature(c[0], &of))).collect()
    }

    /// Backtracks below `p` along positions matching the first path from
    /// `depth` on, returning the first leaf map that is an automorphism.
    fn find_automorphism(
        &self,
        p: Partition,
        depth: usize,
        path: &[Level],
        leaf: &[usize],
    ) -> Result<Option<Vec<usize>>> {
        self.check_time()?;
        if p.is_discrete(self.n) != (depth == path.len()) {
            return Ok(None);
        }
        if p.is_discrete(self.n) {
            let mut map = vec![0; self.n];
            for (pos, cell) in p.cells.iter().enumerate() {
                map[leaf[pos]] = cell[0];
            }
            return Ok(self.is_automorphism(&map).then_some(map));
        }
        let level = &path[depth];
        if p.cells.len() != level.shape.len() || self.shape(&p) != level.shape {
            return Ok(None);
        }
        if !self.singletons_consistent(&p, &level.partition) {
            return Ok(None);
        }
        for &u in &p.cells[level.target] {
            let child = self.refine(p.individualize(level.target, u));
            if let Some(found) = self.find_automorphism(child, depth + 1, path, leaf)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// Singleton cells at equal positions must induce an adjacency-preserving
    /// partial map.
    fn singletons_consistent(&self, p: &Partition, reference: &Partition) -> bool {
        let fixed: Vec<(usize, usize)> = reference
            .cells
            .iter()
            .zip(&p.cells)
            .filter(|(a, _)| a.len() == 1)
            .map(|(a, b)| (a[0], b[0]))
            .collect();
        for (i, &(a, b)) in fixed.iter().enumerate() {
            for &(c, d) in &fixed[i + 1..] {
                if self.g.has_edge(a, c) != self.g.has_edge(b, d) {
                    return false;
                }
            }
        }
        true
    }

    fn is_automorphism(&self, map: &[usize]) -> bool {
        (0..self.n).all(|u| self.adj[u].iter().all(|&v| self.g.has_edge(map[u], map[v])))
    }
}

/// One node of the first path.
struct Level {
    partition: Partition,
    shape: Shape,
    target: usize,
    chosen: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn absorb(&mut self, generator: &[usize]) {
        for (v, &w) in generator.iter().enumerate() {
            self.union(v, w);
        }
    }
}

pub fn aut_size(g: &Graph) -> Result<AutResult> {
    aut_size_with(g, AutOptions::default())
}

pub fn aut_size_with(g: &Graph, opts: AutOptions) -> Result<AutResult> {
    let n = g.order();
    let s = Searcher {
        g,
        adj: g.adjacency_lists(),
        n,
        deadline: opts.deadline,
    };
    if n == 0 {
        return Ok(AutResult {
            order: BigUint::one(),
            orbits: vec![],
            generators_found: 0,
            generators: vec![],
        });
    }

    let mut path: Vec<Level> = Vec::new();
    let mut p = s.refine(Partition::unit(n));
    while let Some(target) = p.target() {
        let chosen = p.cells[target][0];
        let child = s.refine(p.individualize(target, chosen));
        path.push(Level {
            shape: s.shape(&p),
            partition: p,
            target,
            chosen,
        });
        p = child;
    }
    let leaf: Vec<usize> = p.cells.iter().map(|c| c[0]).collect();

    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order = BigUint::one();
    for depth in (0..path.len()).rev() {
        let level = &path[depth];
        let mut uf = UnionFind::new(n);
        for gen in &generators {
            uf.absorb(gen);
        }
        for &w in &level.partition.cells[level.target] {
            if uf.find(w) == uf.find(level.chosen) {
                continue;
            }
            let start = s.refine(level.partition.individualize(level.target, w));
            if let Some(gen) = s.find_automorphism(start, depth + 1, &path, &leaf)? {
                uf.absorb(&gen);
                generators.push(gen);
            }
        }
        let root = uf.find(level.chosen);
        let orbit = level.partition.cells[level.target]
            .iter()
            .filter(|&&w| uf.find(w) == root)
            .count();
        order *= BigUint::from(orbit);
    }

    let mut uf = UnionFind::new(n);
    for gen in &generators {
        uf.absorb(gen);
    }
    Ok(AutResult {
        order,
        orbits: orbits_from(&mut uf, n),
        generators_found: generators.len(),
        generators,
    })
}

fn orbits_from(uf: &mut UnionFind, n: usize) -> Vec<Vec<usize>> {
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    by_root.into_values().collect()
}

/// Largest vertex count accepted by [`aut_size_brute`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Counts automorphisms by checking all n! vertex permutations.
pub fn aut_size_brute(g: &Graph) -> Result<AutResult> {
    let n = g.order();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceLimit(n));
    }
    let edges = g.edges();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    let mut uf = UnionFind::new(n);
    let mut generators = Vec::new();
    let mut visit = |perm: &[usize]| {
        if edges.iter().all(|&(u, v)| g.has_edge(perm[u], perm[v])) {
            count += 1;
            uf.absorb(perm);
            generators.push(perm.to_vec());
        }
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(AutResult {
        order: BigUint::from(count),
        orbits: orbits_from(&mut uf, n),
        generators_found: generators.len(),
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, invert_permutation, Family, GeneratorSpec};
    use crate::rng::SplitMix64;

    fn gen(f: Family) -> Graph {
        generate(&GeneratorSpec::new(f, 0)).unwrap()
    }

    fn factorial(n: u32) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    /// Path 0-1-2-3-4-5 with a pendant vertex 6 attached to 2.
    fn side_node_path() -> Graph {
        Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)]).unwrap()
    }

    #[test]
    fn complete_graph_is_symmetric_group() {
        let r = aut_size(&Graph::complete(20)).unwrap();
        assert_eq!(r.order, factorial(20));
        assert_eq!(r.orbits.len(), 1);
    }

    #[test]
    fn asymmetric_side_node_graph() {
        let r = aut_size(&side_node_path()).unwrap();
        assert_eq!(r.order, BigUint::one());
        assert_eq!(r.orbits.len(), 7);
        assert_eq!(aut_size_brute(&side_node_path()).unwrap().order, BigUint::one());
        let norm = normalized_aut(&side_node_path()).unwrap();
        assert!((norm.over_factorial - 1.0 / 5040.0).abs() < 1e-15);
    }

    #[test]
    fn wheels_are_dihedral() {
        assert_eq!(
            aut_size_brute(&gen(Family::Wheel { n: 7 })).unwrap().order,
            BigUint::from(12u32)
        );
        assert_eq!(
            aut_size(&gen(Family::Wheel { n: 7 })).unwrap().order,
            BigUint::from(12u32)
        );
        assert_eq!(
            aut_size(&gen(Family::Wheel { n: 18 })).unwrap().order,
            BigUint::from(34u32)
        );
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            aut_size_brute(&gen(Family::Path { n: 3 })).unwrap().order,
            BigUint::from(2u32)
        );
        assert_eq!(aut_size_brute(&Graph::empty(5)).unwrap().order, BigUint::from(120u32));
        assert_eq!(
            aut_size_brute(&gen(Family::Cycle { n: 6 })).unwrap().order,
            BigUint::from(12u32)
        );
        assert!(matches!(
            aut_size_brute(&Graph::empty(9)),
            Err(Error::BruteForceLimit(9))
        ));
    }

    #[test]
    fn normalizations() {
        for n in [1, 4, 9] {
            let norm = normalized_aut(&Graph::complete(n)).unwrap();
            assert!((norm.over_factorial - 1.0).abs() < 1e-12);
        }
        assert!((normalized_aut(&Graph::empty(4)).unwrap().over_factorial - 1.0).abs() < 1e-12);
        let r = aut_size(&Graph::complete(10)).unwrap();
        assert!((r.log2_per_vertex() - log2_factorial(10) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn log2_of_large_orders() {
        let f = factorial(300);
        assert!((log2_big(&f) - log2_factorial(300)).abs() < 1e-6);
        let s = aut_size(&Graph::empty(100)).unwrap().summary();
        assert!(s.order_decimal.is_some());
        let s = aut_size(&Graph::empty(200)).unwrap().summary();
        assert!(s.order_decimal.is_none());
    }

    #[test]
    fn known_families() {
        // Petersen graph: order 120
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )
        .unwrap();
        assert_eq!(aut_size(&petersen).unwrap().order, BigUint::from(120u32));
        // rook's graph K4 x K5: S4 x S5
        assert_eq!(
            aut_size(&gen(Family::Lattice { rows: 4, cols: 5 })).unwrap().order,
            BigUint::from(24u32 * 120)
        );
        // K4 x K4 also swaps the factors
        assert_eq!(
            aut_size(&gen(Family::Lattice { rows: 4, cols: 4 })).unwrap().order,
            BigUint::from(2u32 * 24 * 24)
        );
        // cycle C_n is dihedral
        assert_eq!(
            aut_size(&gen(Family::Cycle { n: 20 })).unwrap().order,
            BigUint::from(40u32)
        );
        // disjoint union of 3 triangles: S3 wr S3
        let tri3 = Graph::from_edges(
            9,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7), (7, 8), (6, 8)],
        )
        .unwrap();
        assert_eq!(aut_size(&tri3).unwrap().order, BigUint::from(6u32 * 6 * 6 * 6));
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = SplitMix64::new(2024);
        for i in 0..300 {
            let n = 2 + rng.index(6);
            let p = rng.unit();
            let g = generate(&GeneratorSpec::new(Family::ErGnp { n, p }, i)).unwrap();
            let fast = aut_size(&g).unwrap();
            let slow = aut_size_brute(&g).unwrap();
            assert_eq!(fast.order, slow.order, "graph {:?}", g.edges());
            assert_eq!(fast.orbits, slow.orbits, "graph {:?}", g.edges());
        }
    }

    #[test]
    fn invariant_under_relabelling_and_complement() {
        let mut rng = SplitMix64::new(77);
        for seed in 0..20 {
            let g = generate(&GeneratorSpec::new(
                Family::Circulant {
                    n: 18,
                    offsets: vec![1, 1 + (seed as usize % 8)],
                },
                seed,
            ))
            .unwrap();
            let base = aut_size(&g).unwrap();
            let perm = rng.permutation(18);
            let h = g.permute(&perm).unwrap();
            assert_eq!(aut_size(&h).unwrap().order, base.order);
            assert_eq!(aut_size(&g.complement()).unwrap().order, base.order);
            let _ = invert_permutation(&perm);
        }
    }

    #[test]
    fn orbits_closed_under_generators() {
        for f in [
            Family::Wheel { n: 12 },
            Family::Lattice { rows: 3, cols: 4 },
            Family::Ba { n: 25, m: 1 },
        ] {
            let g = generate(&GeneratorSpec::new(f, 3)).unwrap();
            let r = aut_size(&g).unwrap();
            let mut orbit_of = vec![0; g.order()];
            for (i, o) in r.orbits.iter().enumerate() {
                for &v in o {
                    orbit_of[v] = i;
                }
            }
            for gen in &r.generators {
                assert!(g.edges().iter().all(|&(u, v)| g.has_edge(gen[u], gen[v])));
                for v in 0..g.order() {
                    assert_eq!(orbit_of[v], orbit_of[gen[v]]);
                }
            }
        }
    }

    #[test]
    fn deadline_aborts() {
        let past = Instant::now() - std::time::Duration::from_secs(1);
        let r = aut_size_with(&gen(Family::Cycle { n: 30 }), AutOptions { deadline: Some(past) });
        assert!(r.is_err());
    }
}
