//! Small simple graphs on at most 16 vertices.
//!
//! A [`Graph`] doubles as a 2-coloring of the complete graph on the same
//! vertex set: an edge is a red pair and a non-edge is a blue pair.
//!
//! Edges are exposed as a bitset over the `n(n-1)/2` unordered pairs. The
//! pair `{u, v}` with `u < v` lives in slot `v(v-1)/2 + u`, so the slots of a
//! graph on `k` vertices are a prefix of the slots of any graph that extends
//! it by more vertices. This is also the bit order used by graph6.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 16;

/// Vertex subsets and neighborhoods.
pub type VertexSet = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("edge bits set above slot {0}")]
    StrayBits(usize),
    #[error("invalid graph6 string: {0}")]
    Graph6(String),
}

/// Slot index of the unordered pair `{u, v}`.
#[inline]
pub const fn pair_slot(u: usize, v: usize) -> usize {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    hi * (hi - 1) / 2 + lo
}

/// Number of pair slots of a graph on `n` vertices.
#[inline]
pub const fn slot_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
pub(crate) const fn full_set(n: usize) -> VertexSet {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// Simple undirected graph stored as neighbor bitsets.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: u8,
    adj: [VertexSet; MAX_VERTICES],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n: n as u8,
            adj: [0; MAX_VERTICES],
        })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Ok(Self::empty(n)?.complement())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from its pair-slot bitset.
    pub fn from_edge_bits(n: usize, bits: u128) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let slots = slot_count(n);
        if slots < 128 && bits >> slots != 0 {
            return Err(GraphError::StrayBits(slots));
        }
        let mut slot = 0;
        for v in 1..n {
            for u in 0..v {
                if bits >> slot & 1 == 1 {
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
                slot += 1;
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Neighbor set of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub(crate) fn rows(&self) -> &[VertexSet] {
        &self.adj[..self.n()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Sorted degree sequence.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn triangle_count(&self) -> usize {
        let mut count = 0;
        for v in 0..self.n() {
            for u in 0..v {
                if self.has_edge(u, v) {
                    let below = (1u16 << u) - 1;
                    count += (self.adj[u] & self.adj[v] & below).count_ones() as usize;
                }
            }
        }
        count
    }

    /// Edges as pairs `(u, v)` with `u < v`, in slot order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in 1..self.n() {
            for u in 0..v {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The pair-slot bitset.
    pub fn edge_bits(&self) -> u128 {
        let mut bits = 0u128;
        for v in 1..self.n() {
            let below = (self.adj[v] & ((1u16 << v) - 1)) as u128;
            bits |= below << slot_count(v);
        }
        bits
    }

    /// Same vertex set, edge `{u, v}` present iff absent here.
    pub fn complement(&self) -> Graph {
        let mask = full_set(self.n());
        let mut adj = [0; MAX_VERTICES];
        for v in 0..self.n() {
            adj[v] = !self.adj[v] & mask & !(1 << v);
        }
        Graph { n: self.n, adj }
    }

    /// Subgraph induced by `subset`, relabeled in increasing order of the
    /// original labels. Bits of `subset` at or above `n` are ignored.
    pub fn induced_subgraph(&self, subset: VertexSet) -> Graph {
        let subset = subset & full_set(self.n());
        let mut adj = [0; MAX_VERTICES];
        let mut k = 0;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[k] = compress(self.adj[v], subset);
            k += 1;
        }
        Graph { n: k as u8, adj }
    }

    /// Complements every pair incident to `w`. Panics if `w` is out of range.
    pub fn switch(&self, w: usize) -> Graph {
        assert!(w < self.n(), "switch vertex {w} out of range");
        let mut g = *self;
        let others = full_set(self.n()) & !(1 << w);
        g.adj[w] = !self.adj[w] & others;
        for v in 0..self.n() {
            if v != w {
                g.adj[v] ^= 1 << w;
            }
        }
        g
    }

    /// Adds a new vertex `n` adjacent to every existing vertex.
    pub fn cone(&self) -> Result<Graph, GraphError> {
        self.extend(full_set(self.n()))
    }

    /// Adds a new vertex `n` whose neighborhood is `neighbors`.
    pub fn extend(&self, neighbors: VertexSet) -> Result<Graph, GraphError> {
        let n = self.n();
        if n >= MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n + 1));
        }
        let neighbors = neighbors & full_set(n);
        let mut g = *self;
        g.n += 1;
        g.adj[n] = neighbors;
        let mut rest = neighbors;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g.adj[v] |= 1 << n;
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let n = self.n();
        if perm.len() != n {
            return Err(GraphError::NotAPermutation(n));
        }
        let mut seen: VertexSet = 0;
        for &p in perm {
            if p >= n || seen >> p & 1 == 1 {
                return Err(GraphError::NotAPermutation(n));
            }
            seen |= 1 << p;
        }
        let mut adj = [0; MAX_VERTICES];
        for (v, &pv) in perm.iter().enumerate() {
            let mut row = 0;
            let mut rest = self.adj[v];
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                row |= 1 << perm[u];
            }
            adj[pv] = row;
        }
        Ok(Graph { n: self.n, adj })
    }

    /// Disjoint union, vertices of `other` shifted up by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n() + other.n();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = *self;
        g.n = n as u8;
        for v in 0..other.n() {
            g.adj[self.n() + v] = other.adj[v] << self.n();
        }
        Ok(g)
    }

    /// Symmetric 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n())
            .map(|u| (0..self.n()).map(|v| self.has_edge(u, v) as i64).collect())
            .collect()
    }
}

/// Packs the bits of `row` selected by `mask` into the low bits.
#[inline]
pub(crate) fn compress(row: VertexSet, mask: VertexSet) -> VertexSet {
    let mut out = 0;
    let mut k = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        out |= ((row >> v) & 1) << k;
        k += 1;
    }
    out
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::graph6::encode(self))
    }
}

/// JSON form `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        let mut g = Graph::empty(j.n)?;
        for [u, v] in j.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}
