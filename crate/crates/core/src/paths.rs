//! Path and cycle certificates.
//!
//! Internally vertex-disjoint path systems are decided exactly by a
//! unit-capacity maximum flow on the vertex-split graph. A path "through
//! `U`" has length at least two and all internal vertices in `U`, so the
//! direct edge `xy` never carries flow.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{pair, Graph, Pair, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("endpoints must be distinct, got {0} twice")]
    SameEndpoints(Vertex),
    #[error("endpoint {0} lies in the internal vertex set")]
    EndpointInSet(Vertex),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(Vertex),
    #[error("{0}-{1} is not an edge")]
    MissingEdge(Vertex, Vertex),
}

/// Unit-capacity flow network solved with shortest augmenting paths.
#[derive(Clone, Debug, Default)]
pub(crate) struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    base: Vec<u8>,
    cap: Vec<u8>,
    // Scratch for BFS.
    parent: Vec<usize>,
    queue: VecDeque<usize>,
}

const NONE: usize = usize::MAX;

impl FlowNet {
    pub(crate) fn with_nodes(n: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); n],
            parent: vec![NONE; n],
            ..Default::default()
        }
    }

    /// Adds `u -> v` with capacity `c` plus its residual twin; returns the forward arc.
    pub(crate) fn add_arc(&mut self, u: usize, v: usize, c: u8) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.base.push(c);
        self.cap.push(c);
        self.head[u].push(id);
        self.to.push(u);
        self.base.push(0);
        self.cap.push(0);
        self.head[v].push(id + 1);
        id
    }

    pub(crate) fn set_base(&mut self, arc: usize, c: u8) {
        self.base[arc] = c;
    }

    pub(crate) fn reset(&mut self) {
        self.cap.copy_from_slice(&self.base);
    }

    pub(crate) fn flow_on(&self, arc: usize) -> u8 {
        self.base[arc] - self.cap[arc]
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.queue.clear();
        self.queue.push_back(s);
        self.parent[s] = usize::MAX - 1;
        while let Some(u) = self.queue.pop_front() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && self.parent[v] == NONE {
                    self.parent[v] = a;
                    if v == t {
                        let mut w = t;
                        while w != s {
                            let arc = self.parent[w];
                            self.cap[arc] -= 1;
                            self.cap[arc ^ 1] += 1;
                            w = self.to[arc ^ 1];
                        }
                        return true;
                    }
                    self.queue.push_back(v);
                }
            }
        }
        false
    }

    /// Flow value from `s` to `t`, stopping once `limit` is reached.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        self.reset();
        let mut f = 0;
        while f < limit && self.augment(s, t) {
            f += 1;
        }
        f
    }
}

/// Vertex-split network for paths from `x` to `y` whose internal vertices
/// come from a fixed candidate list. Which candidates are usable can change
/// between solves without rebuilding the network.
#[derive(Clone, Debug)]
pub(crate) struct SplitNetwork {
    net: FlowNet,
    candidates: Vec<Vertex>,
    vertex_arc: Vec<usize>,
    source_arcs: Vec<(Vertex, usize)>,
    s: usize,
    t: usize,
}

impl SplitNetwork {
    /// `candidates` must exclude `x` and `y` and be sorted.
    pub(crate) fn new(g: &Graph, x: Vertex, y: Vertex, candidates: Vec<Vertex>) -> Self {
        let l = candidates.len();
        let (s, t) = (2 * l, 2 * l + 1);
        let mut net = FlowNet::with_nodes(2 * l + 2);
        let local = |v: Vertex| candidates.binary_search(&v).ok();
        let vertex_arc: Vec<usize> = (0..l).map(|i| net.add_arc(2 * i, 2 * i + 1, 1)).collect();
        let mut source_arcs = Vec::new();
        for &v in g.neighbors(x) {
            if let Some(j) = local(v) {
                source_arcs.push((v, net.add_arc(s, 2 * j, 1)));
            }
        }
        for (i, &v) in candidates.iter().enumerate() {
            for &w in g.neighbors(v) {
                if w == y {
                    net.add_arc(2 * i + 1, t, 1);
                } else if let Some(j) = local(w) {
                    net.add_arc(2 * i + 1, 2 * j, 1);
                }
            }
        }
        SplitNetwork {
            net,
            candidates,
            vertex_arc,
            source_arcs,
            s,
            t,
        }
    }

    pub(crate) fn candidates(&self) -> &[Vertex] {
        &self.candidates
    }

    /// Number of internally disjoint paths using only candidates flagged in `active`, capped at `limit`.
    pub(crate) fn count(&mut self, active: impl Fn(usize) -> bool, limit: usize) -> usize {
        for i in 0..self.candidates.len() {
            let c = u8::from(active(i));
            self.net.set_base(self.vertex_arc[i], c);
        }
        self.net.max_flow(self.s, self.t, limit)
    }

    /// Decomposes the current flow into paths `x … y`, in order of second vertex.
    pub(crate) fn paths(&self, x: Vertex, y: Vertex) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        for &(first, arc) in &self.source_arcs {
            if self.net.flow_on(arc) == 0 {
                continue;
            }
            let mut path = vec![x, first];
            let mut node = 2 * self.candidates.binary_search(&first).expect("candidate") + 1;
            loop {
                let next = self.net.head[node]
                    .iter()
                    .copied()
                    .find(|&a| a % 2 == 0 && self.net.flow_on(a) > 0)
                    .map(|a| self.net.to[a])
                    .expect("flow conservation");
                if next == self.t {
                    break;
                }
                path.push(self.candidates[next / 2]);
                node = next + 1;
            }
            path.push(y);
            out.push(path);
        }
        out
    }
}

/// Ordered list of paths sharing endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PathSystem {
    pub paths: Vec<Vec<Vertex>>,
}

impl PathSystem {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

fn check_endpoints(g: &Graph, x: Vertex, y: Vertex, u: &VertexSet) -> Result<(), PathError> {
    if x == y {
        return Err(PathError::SameEndpoints(x));
    }
    for v in [x, y] {
        if !g.has_vertex(v) {
            return Err(PathError::MissingVertex(v));
        }
        if u.contains(v) {
            return Err(PathError::EndpointInSet(v));
        }
    }
    Ok(())
}

/// Exactly `k` internally vertex-disjoint `x–y` paths through `u`, or `None` if no such system exists.
pub fn disjoint_paths(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    u: &VertexSet,
    k: usize,
) -> Result<Option<PathSystem>, PathError> {
    check_endpoints(g, x, y, u)?;
    let candidates: Vec<Vertex> = u.iter().filter(|&v| g.has_vertex(v)).collect();
    let mut net = SplitNetwork::new(g, x, y, candidates);
    if net.count(|_| true, k) < k {
        return Ok(None);
    }
    Ok(Some(PathSystem {
        paths: net.paths(x, y),
    }))
}

/// Maximum number of internally vertex-disjoint `x–y` paths through `u`.
pub fn max_disjoint_paths(g: &Graph, x: Vertex, y: Vertex, u: &VertexSet) -> Result<usize, PathError> {
    check_endpoints(g, x, y, u)?;
    let candidates: Vec<Vertex> = u.iter().filter(|&v| g.has_vertex(v)).collect();
    let mut net = SplitNetwork::new(g, x, y, candidates);
    Ok(net.count(|_| true, usize::MAX))
}

/// Shortest path `from … to` whose internal vertices satisfy `allowed`,
/// scanning neighbors in ascending order. With `min_len2`, the direct edge is not used.
fn bfs_path(
    g: &Graph,
    from: Vertex,
    to: Vertex,
    allowed: impl Fn(Vertex) -> bool,
    min_len2: bool,
) -> Option<Vec<Vertex>> {
    if !min_len2 && g.has_edge(from, to) {
        return Some(vec![from, to]);
    }
    let mut parent: Vec<Option<Vertex>> = vec![None; g.universe()];
    let mut queue = VecDeque::new();
    for &v in g.neighbors(from) {
        if v != to && allowed(v) && parent[v as usize].is_none() {
            parent[v as usize] = Some(from);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if g.has_edge(v, to) {
            let mut path = vec![to, v];
            let mut cur = v;
            while let Some(p) = parent[cur as usize] {
                path.push(p);
                if p == from {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(v) {
            if w != from && w != to && allowed(w) && parent[w as usize].is_none() {
                parent[w as usize] = Some(v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// A path of length at least two from `x` to `y` with internal vertices in `u \ avoid`.
pub fn path_through(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    u: &VertexSet,
    avoid: &VertexSet,
) -> Result<Option<Vec<Vertex>>, PathError> {
    check_endpoints(g, x, y, u)?;
    Ok(bfs_path(g, x, y, |v| u.contains(v) && !avoid.contains(v), true))
}

/// Simple cycle `c0 c1 … c(m-1)` (closing edge back to `c0` implied), `m ≥ 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    /// Validates simplicity and length; edges are checked against `g` when given.
    pub fn new(vertices: Vec<Vertex>) -> Option<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        (vertices.len() >= 3 && sorted.len() == vertices.len()).then_some(Cycle(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// Edges in traversal order, normalized.
    pub fn edges(&self) -> Vec<Pair> {
        let m = self.0.len();
        (0..m).map(|i| pair(self.0[i], self.0[(i + 1) % m])).collect()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges().contains(&pair(a, b))
    }

    /// The two cycle-neighbors of `v`.
    pub fn neighbors_of(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        let m = self.0.len();
        let i = self.0.iter().position(|&w| w == v)?;
        Some((self.0[(i + m - 1) % m], self.0[(i + 1) % m]))
    }

    /// Whether `a b c` appears consecutively in either direction.
    pub fn has_subpath(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        self.neighbors_of(b)
            .is_some_and(|(p, n)| (p == a && n == c) || (p == c && n == a))
    }

    pub fn edges_in(&self, g: &Graph) -> bool {
        self.edges().into_iter().all(|(a, b)| g.has_edge(a, b))
    }
}

fn require_edge(g: &Graph, a: Vertex, b: Vertex) -> Result<(), PathError> {
    for v in [a, b] {
        if !g.has_vertex(v) {
            return Err(PathError::MissingVertex(v));
        }
    }
    if g.has_edge(a, b) {
        Ok(())
    } else {
        Err(PathError::MissingEdge(a, b))
    }
}

/// Cycle containing the subpath `v1 v0 v2` whose other vertices lie in `u \ avoid`.
///
/// Built as `C = v0 v2 … v1` plus the edge `v1 v0`. The forced second vertex
/// `v2` must itself lie in `u \ avoid`; otherwise no cycle qualifies.
pub fn cycle_with_forced_second_vertex(
    g: &Graph,
    v0: Vertex,
    v1: Vertex,
    v2: Vertex,
    u: &VertexSet,
    avoid: &VertexSet,
) -> Result<Option<Cycle>, PathError> {
    if v1 == v2 {
        return Err(PathError::SameEndpoints(v1));
    }
    if v0 == v1 || v0 == v2 {
        return Err(PathError::SameEndpoints(v0));
    }
    require_edge(g, v0, v1)?;
    require_edge(g, v0, v2)?;
    if !u.contains(v2) || avoid.contains(v2) {
        return Ok(None);
    }
    let tail = bfs_path(
        g,
        v2,
        v1,
        |v| v != v0 && u.contains(v) && !avoid.contains(v),
        false,
    );
    Ok(tail.map(|p| {
        let mut c = Vec::with_capacity(p.len() + 1);
        c.push(v0);
        c.extend(p);
        Cycle(c)
    }))
}

/// Cycle through the edge `v0 v3` whose other vertices lie in `u \ avoid`.
pub fn cycle_with_edge(
    g: &Graph,
    v0: Vertex,
    v3: Vertex,
    u: &VertexSet,
    avoid: &VertexSet,
) -> Result<Option<Cycle>, PathError> {
    require_edge(g, v0, v3)?;
    let u = u.iter().filter(|&v| v != v0 && v != v3).collect::<VertexSet>();
    Ok(path_through(g, v0, v3, &u, avoid)?.map(Cycle))
}

/// Some simple cycle of `g`, found by depth-first search from the smallest vertex.
pub fn find_cycle(g: &Graph) -> Option<Cycle> {
    let n = g.universe();
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    for root in g.vertices() {
        if depth[root as usize] != usize::MAX {
            continue;
        }
        depth[root as usize] = 0;
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            if *next == nbrs.len() {
                stack.pop();
                continue;
            }
            let w = nbrs[*next];
            *next += 1;
            if Some(w) == parent[v as usize] {
                continue;
            }
            if depth[w as usize] == usize::MAX {
                depth[w as usize] = depth[v as usize] + 1;
                parent[w as usize] = Some(v);
                stack.push((w, 0));
            } else if depth[w as usize] < depth[v as usize] {
                // Back edge to an ancestor closes a cycle.
                let mut cycle = vec![v];
                let mut cur = v;
                while cur != w {
                    cur = parent[cur as usize].expect("ancestor chain");
                    cycle.push(cur);
                }
                return Cycle::new(cycle);
            }
        }
    }
    None
}
