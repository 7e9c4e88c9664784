//! Dense undirected graphs over vertices `0..n`.

use std::fmt;
use std::ops::Add;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A set of vertices over a fixed universe `0..n`.
pub type VertexSet = FixedBitSet;

/// Builds a [`VertexSet`] over `0..n` from a list of vertices.
pub fn vertex_set(n: usize, vertices: &[usize]) -> Result<VertexSet> {
    let mut set = FixedBitSet::with_capacity(n);
    for &v in vertices {
        if v >= n {
            return Err(Error::domain(format!("vertex {v} out of range for n = {n}")));
        }
        set.insert(v);
    }
    Ok(set)
}

/// The members of a set in ascending order.
pub fn members(set: &VertexSet) -> Vec<usize> {
    set.ones().collect()
}

/// A shortest-path distance: a finite hop count or `Inf` for disconnected
/// pairs. `Inf` sorts above every finite value and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtDist {
    Finite(u32),
    Inf,
}

impl ExtDist {
    pub const ZERO: ExtDist = ExtDist::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtDist::Finite(d) => Some(d),
            ExtDist::Inf => None,
        }
    }

    /// Multiplies a finite distance by `k`; `Inf` stays `Inf`.
    pub fn scale(self, k: u32) -> ExtDist {
        match self {
            ExtDist::Finite(d) => ExtDist::Finite(d.saturating_mul(k)),
            ExtDist::Inf => ExtDist::Inf,
        }
    }

    /// `true` iff the distance is finite and at most `r`.
    pub fn within(self, r: u32) -> bool {
        matches!(self, ExtDist::Finite(d) if d <= r)
    }
}

impl Add for ExtDist {
    type Output = ExtDist;

    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a.saturating_add(b)),
            _ => ExtDist::Inf,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Finite(d) => write!(f, "{d}"),
            ExtDist::Inf => f.write_str("inf"),
        }
    }
}

/// A simple undirected graph stored as one adjacency bit-row per vertex.
///
/// Rows are kept symmetric and irreflexive by every mutator, so complements
/// and flips reduce to word-wise XORs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        Graph::empty(n).complement()
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Decodes a labelled graph from a bit mask over vertex pairs in the
    /// order `(0,1), (0,2), .., (0,n-1), (1,2), ..`. Every labelled graph on
    /// `n` vertices corresponds to exactly one mask below `2^(n(n-1)/2)`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    g.set_edge(u, v, true);
                }
                bit += 1;
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::domain(format!("vertex {v} out of range for n = {}", self.n)))
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Sets or clears the edge `uv`. Ignores `u == v`.
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if u == v {
            return;
        }
        self.rows[u].set(v, present);
        self.rows[v].set(u, present);
    }

    /// The open neighbourhood of `v`.
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// The full vertex set.
    pub fn all_vertices(&self) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    pub fn complement(&self) -> Graph {
        let mut rows = self.rows.clone();
        for (u, row) in rows.iter_mut().enumerate() {
            row.toggle_range(..);
            row.set(u, false);
        }
        Graph { n: self.n, rows }
    }

    /// The `(A,B)`-flip: adjacency is complemented on every unordered pair
    /// `{a, b}` with `a ∈ A`, `b ∈ B`, `a ≠ b`.
    pub fn flip_sets(&self, a: &VertexSet, b: &VertexSet) -> Graph {
        let mut out = self.clone();
        for (x, row) in out.rows.iter_mut().enumerate() {
            let mut mask = FixedBitSet::with_capacity(self.n);
            if a.contains(x) {
                mask.union_with(b);
            }
            if b.contains(x) {
                mask.union_with(a);
            }
            mask.set(x, false);
            row.symmetric_difference_with(&mask);
        }
        out
    }

    /// XORs `mask` into the row of `u` without touching other rows. Callers
    /// must keep the result symmetric.
    pub(crate) fn xor_row(&mut self, u: usize, mask: &FixedBitSet) {
        self.rows[u].symmetric_difference_with(mask);
        self.rows[u].set(u, false);
    }

    /// `G[S]` together with the table mapping new indices to old ones.
    pub fn induced(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut table: Vec<usize> = s.to_vec();
        table.sort_unstable();
        table.dedup();
        for &v in &table {
            self.check_vertex(v)?;
        }
        let mut g = Graph::empty(table.len());
        for (i, &u) in table.iter().enumerate() {
            for (j, &v) in table.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok((g, table))
    }

    /// The bipartite subgraph `G[A,B]` with left side `A` and right side `B`.
    ///
    /// Local vertices `0..|A|` are `A` in ascending order, followed by `B`
    /// in ascending order; the returned table maps them back.
    pub fn bipartite_induced(&self, a: &[usize], b: &[usize]) -> Result<(Bipartite, Vec<usize>)> {
        let mut left = a.to_vec();
        left.sort_unstable();
        left.dedup();
        let mut right = b.to_vec();
        right.sort_unstable();
        right.dedup();
        for &v in left.iter().chain(&right) {
            self.check_vertex(v)?;
        }
        if let Some(v) = left.iter().find(|v| right.binary_search(v).is_ok()) {
            return Err(Error::domain(format!("sides overlap at vertex {v}")));
        }
        let mut g = Graph::empty(left.len() + right.len());
        for (i, &u) in left.iter().enumerate() {
            for (j, &v) in right.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.set_edge(i, left.len() + j, true);
                }
            }
        }
        let mut left_mask = FixedBitSet::with_capacity(g.n);
        left_mask.insert_range(..left.len());
        let table = left.into_iter().chain(right).collect();
        Ok((Bipartite { graph: g, left: left_mask }, table))
    }

    pub fn bfs_distances(&self, src: usize) -> Result<Vec<ExtDist>> {
        self.check_vertex(src)?;
        Ok(self.distances_from(src))
    }

    pub(crate) fn distances_from(&self, src: usize) -> Vec<ExtDist> {
        let mut dist = vec![ExtDist::Inf; self.n];
        dist[src] = ExtDist::ZERO;
        let mut visited = FixedBitSet::with_capacity(self.n);
        visited.insert(src);
        let mut frontier = visited.clone();
        let mut depth = 0u32;
        while !frontier.is_clear() {
            let mut next = FixedBitSet::with_capacity(self.n);
            for u in frontier.ones() {
                next.union_with(&self.rows[u]);
            }
            next.difference_with(&visited);
            depth += 1;
            for v in next.ones() {
                dist[v] = ExtDist::Finite(depth);
            }
            visited.union_with(&next);
            frontier = next;
        }
        dist
    }

    /// `Ball^r(v)`: all vertices at distance at most `r` from `v`.
    pub fn ball(&self, v: usize, r: u32) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut src = FixedBitSet::with_capacity(self.n);
        src.insert(v);
        Ok(self.ball_of_set(&src, r))
    }

    /// `Ball^r(A) = ∪_{a∈A} Ball^r(a)` by a multi-source BFS.
    pub fn ball_of_set(&self, sources: &VertexSet, r: u32) -> VertexSet {
        let mut visited = sources.clone();
        let mut frontier = sources.clone();
        for _ in 0..r {
            if frontier.is_clear() {
                break;
            }
            let mut next = FixedBitSet::with_capacity(self.n);
            for u in frontier.ones() {
                next.union_with(&self.rows[u]);
            }
            next.difference_with(&visited);
            visited.union_with(&next);
            frontier = next;
        }
        visited
    }

    /// Distance matrix by one BFS per source.
    pub fn all_pairs(&self) -> Vec<Vec<ExtDist>> {
        (0..self.n).map(|s| self.distances_from(s)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances_from(0).iter().all(|d| d.is_finite())
    }

    /// Maximum pairwise distance; `Inf` iff disconnected.
    pub fn diameter(&self) -> Result<ExtDist> {
        if self.n == 0 {
            return Err(Error::domain("diameter of the empty graph"));
        }
        let mut best = ExtDist::ZERO;
        for s in 0..self.n {
            let far = self.distances_from(s).into_iter().max().unwrap_or(ExtDist::ZERO);
            if far == ExtDist::Inf {
                return Ok(ExtDist::Inf);
            }
            best = best.max(far);
        }
        Ok(best)
    }
}

/// A bipartite graph whose bipartition is part of the value.
///
/// The vertex universe is `0..n`; `left` marks side `U`, everything else is
/// side `V`. Edges only cross sides.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bipartite {
    graph: Graph,
    left: VertexSet,
}

impl Bipartite {
    pub fn new(graph: Graph, left: VertexSet) -> Result<Self> {
        if left.len() != graph.n() {
            return Err(Error::domain("side mask does not match the vertex count"));
        }
        if let Some((u, v)) = graph.edges().find(|&(u, v)| left.contains(u) == left.contains(v)) {
            return Err(Error::domain(format!("edge {u}-{v} does not cross the bipartition")));
        }
        Ok(Bipartite { graph, left })
    }

    /// Left side `0..nl`, right side `nl..nl+nr`; `edges` are pairs
    /// `(i, j)` meaning left `i` to right `j` in side-local indices.
    pub fn from_sides(nl: usize, nr: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(nl + nr);
        for &(i, j) in edges {
            if i >= nl || j >= nr {
                return Err(Error::domain(format!("bipartite edge ({i},{j}) out of range")));
            }
            g.set_edge(i, nl + j, true);
        }
        let mut left = FixedBitSet::with_capacity(nl + nr);
        left.insert_range(..nl);
        Ok(Bipartite { graph: g, left })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn is_left(&self, v: usize) -> bool {
        self.left.contains(v)
    }

    pub fn left(&self) -> Vec<usize> {
        self.left.ones().collect()
    }

    pub fn right(&self) -> Vec<usize> {
        self.left.zeroes().collect()
    }

    pub fn left_mask(&self) -> &VertexSet {
        &self.left
    }

    /// Complements the crossing edges only; sides are preserved.
    pub fn complement(&self) -> Bipartite {
        let right = {
            let mut r = self.left.clone();
            r.toggle_range(..);
            r
        };
        let graph = self.graph.flip_sets(&self.left, &right);
        Bipartite { graph, left: self.left.clone() }
    }

    /// The sub-bipartite graph `B[U', V']` for `U' ⊆ U`, `V' ⊆ V`, with
    /// the re-indexing table.
    pub fn restrict(&self, u: &[usize], v: &[usize]) -> Result<(Bipartite, Vec<usize>)> {
        if let Some(x) = u.iter().find(|&&x| x >= self.n() || !self.is_left(x)) {
            return Err(Error::domain(format!("vertex {x} is not on the left side")));
        }
        if let Some(x) = v.iter().find(|&&x| x >= self.n() || self.is_left(x)) {
            return Err(Error::domain(format!("vertex {x} is not on the right side")));
        }
        self.graph.bipartite_induced(u, v)
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn diameter(&self) -> Result<ExtDist> {
        self.graph.diameter()
    }

    /// Vertices with no neighbour.
    pub fn isolated(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(|&v| self.graph.degree(v) == 0)
    }
}
