//! 3-uniform hypergraphs, simple graphs, link graphs and codegree statistics.
//!
//! Vertices are dense integer IDs `0..n`. Hyperedges are stored as ascending
//! triples in a sorted, deduplicated vector, so equality, hashing and
//! serialization all work on the canonical form.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier.
pub type Vertex = u32;

/// Unordered vertex pair stored as `(min, max)`.
pub type Pair = (Vertex, Vertex);

/// Normalizes an unordered pair.
#[inline]
pub fn pair(a: Vertex, b: Vertex) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("repeated vertex {0} in triple")]
    RepeatedVertex(Vertex),
    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(Vertex),
    #[error("need at least {needed} vertices, have {n}")]
    TooFewVertices { needed: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge {0}-{1} has an endpoint outside the vertex set")]
    DanglingEdge(Vertex, Vertex),
}

/// A 3-element vertex set in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Vertex; 3]", try_from = "[Vertex; 3]")]
pub struct Triple([Vertex; 3]);

impl Triple {
    /// Builds the canonical triple, rejecting repeated vertices.
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Result<Self, HypergraphError> {
        let mut t = [a, b, c];
        t.sort_unstable();
        if t[0] == t[1] {
            return Err(HypergraphError::RepeatedVertex(t[0]));
        }
        if t[1] == t[2] {
            return Err(HypergraphError::RepeatedVertex(t[1]));
        }
        Ok(Triple(t))
    }

    /// Cone of a vertex over a pair. Panics if the vertices are not distinct.
    pub fn cone(apex: Vertex, (a, b): Pair) -> Self {
        Triple::new(apex, a, b).expect("cone apex must not lie on its base edge")
    }

    #[inline]
    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// The three 1-faces, each normalized.
    pub fn pairs(&self) -> [Pair; 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    /// The pair left after removing `v`, if `v` is a corner.
    pub fn opposite(&self, v: Vertex) -> Option<Pair> {
        let [a, b, c] = self.0;
        match v {
            _ if v == a => Some((b, c)),
            _ if v == b => Some((a, c)),
            _ if v == c => Some((a, b)),
            _ => None,
        }
    }

    /// The vertex completing `p` to this triple, if `p` is a face.
    pub fn apex_over(&self, p: Pair) -> Option<Vertex> {
        if !self.contains(p.0) || !self.contains(p.1) || p.0 == p.1 {
            return None;
        }
        self.0.iter().copied().find(|&v| v != p.0 && v != p.1)
    }

    pub fn max_vertex(&self) -> Vertex {
        self.0[2]
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} {}]", self.0[0], self.0[1], self.0[2])
    }
}

impl From<Triple> for [Vertex; 3] {
    fn from(t: Triple) -> Self {
        t.0
    }
}

impl TryFrom<[Vertex; 3]> for Triple {
    type Error = HypergraphError;

    fn try_from(v: [Vertex; 3]) -> Result<Self, Self::Error> {
        Triple::new(v[0], v[1], v[2])
    }
}

/// A set of vertex IDs, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(a: [Vertex; N]) -> Self {
        a.into_iter().collect()
    }
}

/// Simple undirected graph on a subset of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    present: Vec<bool>,
    adj: Vec<Vec<Vertex>>,
    vertex_count: usize,
    edge_count: usize,
}

impl Graph {
    /// Graph on the given vertices; every edge endpoint must be one of them.
    pub fn new(
        n: usize,
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Pair>,
    ) -> Result<Self, HypergraphError> {
        let mut present = vec![false; n];
        for v in vertices {
            let slot = present
                .get_mut(v as usize)
                .ok_or(HypergraphError::VertexOutOfRange { vertex: v, n })?;
            *slot = true;
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(HypergraphError::SelfLoop(a));
            }
            let ok = |v: Vertex| present.get(v as usize).copied().unwrap_or(false);
            if !ok(a) || !ok(b) {
                return Err(HypergraphError::DanglingEdge(a, b));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        let vertex_count = present.iter().filter(|&&p| p).count();
        Ok(Graph {
            present,
            adj,
            vertex_count,
            edge_count: edge_count / 2,
        })
    }

    /// Graph whose vertex set is exactly the endpoints of `edges`.
    pub fn from_edges(n: usize, edges: &[Pair]) -> Result<Self, HypergraphError> {
        let verts: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        Graph::new(n, verts, edges.iter().copied())
    }

    /// Complete graph on the given vertices.
    pub fn complete(n: usize, vertices: &[Vertex]) -> Self {
        let mut edges = Vec::new();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                edges.push(pair(a, b));
            }
        }
        Graph::new(n, vertices.iter().copied(), edges).expect("complete graph on valid vertices")
    }

    /// Size of the ambient ID space.
    pub fn universe(&self) -> usize {
        self.present.len()
    }

    #[inline]
    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.present.get(v as usize).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| i as Vertex)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list; empty for absent vertices.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.get(v as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// All edges in ascending order.
    pub fn edges(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (a, list) in self.adj.iter().enumerate() {
            let a = a as Vertex;
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Induced subgraph on `keep` (intersected with the current vertex set).
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let verts: Vec<Vertex> = keep.iter().filter(|&v| self.has_vertex(v)).collect();
        let edges: Vec<Pair> = self
            .edges()
            .into_iter()
            .filter(|&(a, b)| keep.contains(a) && keep.contains(b))
            .collect();
        Graph::new(self.universe(), verts, edges).expect("induced subgraph is well formed")
    }

    /// Same vertex set with the listed edges deleted.
    pub fn without_edges(&self, removed: &[Pair]) -> Graph {
        let removed: BTreeSet<Pair> = removed.iter().map(|&(a, b)| pair(a, b)).collect();
        let edges: Vec<Pair> = self
            .edges()
            .into_iter()
            .filter(|e| !removed.contains(e))
            .collect();
        Graph::new(self.universe(), self.vertices(), edges).expect("edge deletion keeps validity")
    }
}

/// 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<Triple>,
}

impl Hypergraph3 {
    /// Builds a hypergraph, collapsing duplicate triples.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Triple>) -> Result<Self, HypergraphError> {
        let mut edges: Vec<Triple> = edges.into_iter().collect();
        if let Some(bad) = edges.iter().find(|t| t.max_vertex() as usize >= n) {
            return Err(HypergraphError::VertexOutOfRange {
                vertex: bad.max_vertex(),
                n,
            });
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Hypergraph3 { n, edges })
    }

    /// Builds from raw triples, validating each.
    pub fn from_triples(n: usize, raw: &[[Vertex; 3]]) -> Result<Self, HypergraphError> {
        let triples = raw
            .iter()
            .map(|&[a, b, c]| Triple::new(a, b, c))
            .collect::<Result<Vec<_>, _>>()?;
        Hypergraph3::new(n, triples)
    }

    /// All `C(n,3)` triples.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n as Vertex {
            for b in a + 1..n as Vertex {
                for c in b + 1..n as Vertex {
                    edges.push(Triple([a, b, c]));
                }
            }
        }
        Hypergraph3 { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    #[inline]
    pub fn contains(&self, t: &Triple) -> bool {
        self.edges.binary_search(t).is_ok()
    }

    pub fn contains_vertices(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        Triple::new(a, b, c).is_ok_and(|t| self.contains(&t))
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), HypergraphError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(HypergraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Number of hyperedges containing `u`.
    pub fn degree(&self, u: Vertex) -> usize {
        self.edges.iter().filter(|t| t.contains(u)).count()
    }

    /// Link graph of `u`: vertex set `V \ {u}`, edge `vw` iff `uvw` is a hyperedge.
    pub fn link_graph(&self, u: Vertex) -> Result<Graph, HypergraphError> {
        self.check_vertex(u)?;
        let edges: Vec<Pair> = self.edges.iter().filter_map(|t| t.opposite(u)).collect();
        Graph::new(self.n, (0..self.n as Vertex).filter(|&v| v != u), edges)
    }

    /// Common link of `u` and `u2` on `V \ {u, u2}`.
    pub fn pair_link(&self, u: Vertex, u2: Vertex) -> Result<Graph, HypergraphError> {
        self.check_vertex(u)?;
        self.check_vertex(u2)?;
        if u == u2 {
            return Err(HypergraphError::SameVertex(u));
        }
        let edges: Vec<Pair> = self
            .edges
            .iter()
            .filter_map(|t| t.opposite(u))
            .filter(|&(a, b)| a != u2 && b != u2 && self.contains(&Triple::cone(u2, (a, b))))
            .collect();
        Graph::new(
            self.n,
            (0..self.n as Vertex).filter(|&v| v != u && v != u2),
            edges,
        )
    }

    /// `|{t : tvw ∈ E}|`.
    pub fn codegree(&self, v: Vertex, w: Vertex) -> Result<usize, HypergraphError> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        if v == w {
            return Err(HypergraphError::SameVertex(v));
        }
        Ok(self
            .edges
            .iter()
            .filter(|t| t.contains(v) && t.contains(w))
            .count())
    }

    /// Vertices `t` with `t v w` a hyperedge, ascending.
    pub fn common_neighbors(&self, v: Vertex, w: Vertex) -> Vec<Vertex> {
        let p = pair(v, w);
        self.edges.iter().filter_map(|t| t.apex_over(p)).collect()
    }

    /// Sub-hypergraph on the same vertex set with edges restricted to `keep`.
    pub fn restrict(&self, keep: &[Triple]) -> Hypergraph3 {
        let keep: BTreeSet<&Triple> = keep.iter().collect();
        Hypergraph3 {
            n: self.n,
            edges: self.edges.iter().filter(|t| keep.contains(t)).copied().collect(),
        }
    }

    /// Codegree table `T_vw` for every pair with `T_vw > 0`, grouped with the extending vertices.
    pub fn codegree_table(&self) -> Vec<(Pair, Vec<Vertex>)> {
        let mut grouped: Vec<(Pair, Vertex)> = Vec::with_capacity(self.edges.len() * 3);
        for t in &self.edges {
            let [a, b, c] = t.vertices();
            grouped.push(((a, b), c));
            grouped.push(((a, c), b));
            grouped.push(((b, c), a));
        }
        grouped.sort_unstable();
        let mut out: Vec<(Pair, Vec<Vertex>)> = Vec::new();
        for (p, v) in grouped {
            match out.last_mut() {
                Some((q, list)) if *q == p => list.push(v),
                _ => out.push((p, vec![v])),
            }
        }
        out
    }

    /// `e(H_{u,u'})` for every ordered pair `u < u'`, as a dense row-major `n × n` table.
    pub fn pair_link_sizes(&self) -> Vec<u32> {
        let n = self.n;
        let mut counts = vec![0u32; n * n];
        for (_, ext) in self.codegree_table() {
            for (i, &a) in ext.iter().enumerate() {
                for &b in &ext[i + 1..] {
                    counts[a as usize * n + b as usize] += 1;
                }
            }
        }
        counts
    }

    /// Pair maximizing `e(H_{u,u'})`, lexicographically smallest on ties.
    pub fn best_pair(&self) -> Result<(Vertex, Vertex, usize), HypergraphError> {
        if self.n < 2 {
            return Err(HypergraphError::TooFewVertices { needed: 2, n: self.n });
        }
        let n = self.n;
        let counts = self.pair_link_sizes();
        let mut best = (0, 1, counts[1]);
        for a in 0..n {
            for b in a + 1..n {
                let c = counts[a * n + b];
                if c > best.2 {
                    best = (a as Vertex, b as Vertex, c);
                }
            }
        }
        Ok((best.0, best.1, best.2 as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, raw: &[[Vertex; 3]]) -> Hypergraph3 {
        Hypergraph3::from_triples(n, raw).unwrap()
    }

    #[test]
    fn link_graph_examples() {
        let h = hg(4, &[[0, 1, 2], [0, 1, 3]]);
        assert_eq!(h.link_graph(0).unwrap().edges(), vec![(1, 2), (1, 3)]);

        let h = hg(4, &[[0, 1, 2]]);
        let g = h.link_graph(3).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_set(), VertexSet::from([0, 1, 2]));

        assert!(matches!(
            h.link_graph(4),
            Err(HypergraphError::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn pair_link_examples() {
        let h = hg(5, &[[0, 2, 3], [1, 2, 3], [0, 3, 4], [1, 3, 4]]);
        assert_eq!(h.pair_link(0, 1).unwrap().edges(), vec![(2, 3), (3, 4)]);

        let h = hg(3, &[[0, 1, 2]]);
        assert_eq!(h.pair_link(0, 1).unwrap().edge_count(), 0);
        assert_eq!(h.pair_link(1, 1), Err(HypergraphError::SameVertex(1)));

        let h = Hypergraph3::complete(6);
        let g = h.pair_link(0, 1).unwrap();
        assert_eq!(g, Graph::complete(6, &[2, 3, 4, 5]));
    }

    #[test]
    fn codegree_examples() {
        let h = hg(5, &[[0, 2, 3], [1, 2, 3], [4, 2, 3]]);
        assert_eq!(h.codegree(2, 3).unwrap(), 3);
        let h = hg(5, &[[0, 1, 2]]);
        assert_eq!(h.codegree(3, 4).unwrap(), 0);
        assert_eq!(h.codegree(3, 3), Err(HypergraphError::SameVertex(3)));
        let h = Hypergraph3::complete(7);
        assert_eq!(h.codegree(1, 5).unwrap(), 5);
    }

    #[test]
    fn best_pair_examples() {
        let h = hg(5, &[[0, 2, 3], [1, 2, 3], [0, 3, 4], [1, 3, 4]]);
        // Enumerate all pairs directly through pair_link.
        let mut brute = (0, 0, 0);
        let mut first = true;
        for a in 0..5 {
            for b in a + 1..5 {
                let e = h.pair_link(a, b).unwrap().edge_count();
                if first || e > brute.2 {
                    brute = (a, b, e);
                    first = false;
                }
            }
        }
        assert_eq!(brute, (0, 1, 2));
        assert_eq!(h.best_pair().unwrap(), brute);

        let empty = Hypergraph3::new(4, []).unwrap();
        assert_eq!(empty.best_pair().unwrap(), (0, 1, 0));
        assert_eq!(Hypergraph3::complete(6).best_pair().unwrap(), (0, 1, 6));
        assert!(Hypergraph3::new(1, []).unwrap().best_pair().is_err());
    }

    #[test]
    fn triple_rejects_repeats() {
        assert_eq!(Triple::new(0, 0, 1), Err(HypergraphError::RepeatedVertex(0)));
        assert_eq!(Triple::new(2, 1, 0).unwrap().vertices(), [0, 1, 2]);
        assert_eq!(Triple::new(4, 1, 0).unwrap().apex_over((0, 4)), Some(1));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::new(3, [0, 1], [(0, 0)]).is_err());
        assert!(Graph::new(3, [0, 1], [(0, 2)]).is_err());
        let g = Graph::new(4, [0, 1, 2], [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.without_edges(&[(1, 0)]).edges(), vec![(1, 2)]);
        assert_eq!(g.induced(&VertexSet::from([0, 1])).edges(), vec![(0, 1)]);
    }
}
