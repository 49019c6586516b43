//! Recognition of triangulated surfaces.
//!
//! [`classify`] decides whether the complex generated by a set of triangles
//! is a compact 2-manifold (possibly with boundary) and, if so, which one.
//! The checks run in a fixed order:
//!
//! 1. every 1-simplex lies in one or two facets;
//! 2. every vertex link is a single path or a single cycle (no pinch points);
//! 3. the facets are connected through shared 1-simplices;
//! 4. orientability, by propagating a facet orientation across shared edges;
//! 5. the verdict, from the Euler characteristic, orientability and the
//!    number of boundary cycles.
//!
//! For a connected closed surface the pair (χ, orientable) determines the
//! homeomorphism type, so this is a complete recognizer for the surfaces the
//! rest of the crate constructs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hypergraph::{pair, Hypergraph3, Pair, Triple, Vertex, VertexSet};

/// Pure 2-dimensional simplicial complex given by its facets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Complex2 {
    facets: Vec<Triple>,
}

impl Complex2 {
    pub fn new(facets: impl IntoIterator<Item = Triple>) -> Self {
        let mut facets: Vec<Triple> = facets.into_iter().collect();
        facets.sort_unstable();
        facets.dedup();
        Complex2 { facets }
    }

    pub fn from_hypergraph(h: &Hypergraph3) -> Self {
        Complex2 {
            facets: h.edges().to_vec(),
        }
    }

    /// Facets in ascending canonical order.
    pub fn facets(&self) -> &[Triple] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.facets.iter().flat_map(|t| t.vertices()).collect()
    }

    /// All 1-simplices, ascending.
    pub fn edges(&self) -> Vec<Pair> {
        let mut e: Vec<Pair> = self.facets.iter().flat_map(|t| t.pairs()).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.facets.binary_search(t).is_ok()
    }

    /// Union of two complexes.
    pub fn union(&self, other: &Complex2) -> Complex2 {
        Complex2::new(self.facets.iter().chain(other.facets.iter()).copied())
    }

    /// Applies a vertex relabeling.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Complex2 {
        Complex2::new(self.facets.iter().map(|t| {
            let [a, b, c] = t.vertices();
            Triple::new(map(a), map(b), map(c)).expect("relabeling must be injective")
        }))
    }

    /// Hypergraph on `0..n` with these facets as edges.
    pub fn to_hypergraph(&self) -> Hypergraph3 {
        let n = self.facets.iter().map(|t| t.max_vertex() as usize + 1).max().unwrap_or(0);
        Hypergraph3::new(n, self.facets.iter().copied()).expect("n covers all vertices")
    }
}

impl FromIterator<Triple> for Complex2 {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Complex2::new(iter)
    }
}

/// `V − E + F` of the associated complex.
pub fn euler_characteristic(x: &Complex2) -> i64 {
    x.vertices().len() as i64 - x.edges().len() as i64 + x.facet_count() as i64
}

/// A closed boundary walk, listed without repeating the first vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BoundaryWalk(pub Vec<Vertex>);

impl BoundaryWalk {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Equality as cyclic sequences, up to rotation and reflection.
    pub fn matches_cycle(&self, cycle: &[Vertex]) -> bool {
        cyclic_eq(&self.0, cycle)
    }
}

/// Whether two cyclic vertex sequences describe the same cycle.
pub fn cyclic_eq(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let len = a.len();
    let Some(start) = b.iter().position(|&v| v == a[0]) else {
        return false;
    };
    let forward = (0..len).all(|i| a[i] == b[(start + i) % len]);
    let backward = (0..len).all(|i| a[i] == b[(start + len - i) % len]);
    forward || backward
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotSurfaceReason {
    BadEdgeDegree,
    BadLink,
    Disconnected,
    Empty,
}

impl NotSurfaceReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NotSurfaceReason::BadEdgeDegree => "bad-edge-degree",
            NotSurfaceReason::BadLink => "bad-link",
            NotSurfaceReason::Disconnected => "disconnected",
            NotSurfaceReason::Empty => "empty",
        }
    }
}

impl fmt::Display for NotSurfaceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sphere,
    Torus { genus: u32 },
    /// Connected sum of `crosscaps` projective planes; `crosscaps == 1` is RP².
    NonOrientable { crosscaps: u32 },
    Disk,
    SurfaceWithBoundary {
        chi: i64,
        orientable: bool,
        boundary_components: usize,
    },
    NotASurface(NotSurfaceReason),
}

impl Verdict {
    pub fn is_rp2(&self) -> bool {
        matches!(self, Verdict::NonOrientable { crosscaps: 1 })
    }

    pub fn is_surface(&self) -> bool {
        !matches!(self, Verdict::NotASurface(_))
    }

    pub fn is_closed_surface(&self) -> bool {
        matches!(
            self,
            Verdict::Sphere | Verdict::Torus { .. } | Verdict::NonOrientable { .. }
        )
    }

    pub fn has_boundary(&self) -> bool {
        matches!(self, Verdict::Disk | Verdict::SurfaceWithBoundary { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sphere => f.write_str("Sphere"),
            Verdict::NonOrientable { crosscaps: 1 } => f.write_str("RP2"),
            Verdict::Torus { genus } => write!(f, "Torus(g={genus})"),
            Verdict::NonOrientable { crosscaps } => write!(f, "NonOrientable(k={crosscaps})"),
            Verdict::Disk => f.write_str("Disk"),
            Verdict::SurfaceWithBoundary {
                chi,
                orientable,
                boundary_components,
            } => write!(
                f,
                "SurfaceWithBoundary(chi={chi},orientable={orientable},boundary={boundary_components})"
            ),
            Verdict::NotASurface(_) => f.write_str("NotASurface"),
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub facet_count: usize,
    pub euler_char: i64,
    pub connected: bool,
    pub boundary: Vec<BoundaryWalk>,
    /// `None` when the complex is not a manifold.
    pub orientable: Option<bool>,
    pub verdict: Verdict,
}

impl SurfaceReport {
    pub fn boundary_components(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary_vertices(&self) -> VertexSet {
        self.boundary.iter().flat_map(|w| w.0.iter().copied()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for SurfaceReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let reason = match self.verdict {
            Verdict::NotASurface(r) => Some(r),
            _ => None,
        };
        let mut s = serializer.serialize_struct("SurfaceReport", 8 + reason.is_some() as usize)?;
        s.serialize_field("V", &self.vertex_count)?;
        s.serialize_field("E", &self.edge_count)?;
        s.serialize_field("F", &self.facet_count)?;
        s.serialize_field("chi", &self.euler_char)?;
        s.serialize_field("connected", &self.connected)?;
        s.serialize_field("boundary_components", &self.boundary.len())?;
        s.serialize_field("orientable", &self.orientable)?;
        s.serialize_field("verdict", &self.verdict.to_string())?;
        if let Some(r) = reason {
            s.serialize_field("reason", r.as_str())?;
        }
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("complex has no boundary to inspect: verdict {0}")]
    NoBoundary(Verdict),
    #[error("complex is not a surface: {0}")]
    NotASurface(NotSurfaceReason),
}

/// Sign of the directed edge `v -> w` in the positive orientation `a -> b -> c -> a`
/// of the ascending triple.
fn edge_sign(t: &Triple, v: Vertex, w: Vertex) -> i8 {
    let [a, b, c] = t.vertices();
    if (v, w) == (a, b) || (v, w) == (b, c) || (v, w) == (c, a) {
        1
    } else {
        -1
    }
}

struct Incidence {
    /// 1-simplex -> indices of facets containing it.
    edge_facets: BTreeMap<Pair, Vec<usize>>,
    /// vertex -> opposite edges of incident facets.
    links: BTreeMap<Vertex, Vec<Pair>>,
}

fn incidence(facets: &[Triple]) -> Incidence {
    let mut edge_facets: BTreeMap<Pair, Vec<usize>> = BTreeMap::new();
    let mut links: BTreeMap<Vertex, Vec<Pair>> = BTreeMap::new();
    for (i, t) in facets.iter().enumerate() {
        for p in t.pairs() {
            edge_facets.entry(p).or_default().push(i);
        }
        for v in t.vertices() {
            links.entry(v).or_default().push(t.opposite(v).expect("corner"));
        }
    }
    Incidence { edge_facets, links }
}

/// A link is valid when it is one path or one cycle: connected, all degrees at most two.
fn link_is_path_or_cycle(edges: &[Pair]) -> bool {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|n| n.len() > 2) {
        return false;
    }
    let start = match adj.keys().next() {
        Some(&s) => s,
        None => return false,
    };
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if !seen.contains(&w) {
                seen.push(w);
                stack.push(w);
            }
        }
    }
    seen.len() == adj.len()
}

fn facets_connected(n_facets: usize, inc: &Incidence) -> bool {
    if n_facets == 0 {
        return false;
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n_facets];
    for fs in inc.edge_facets.values() {
        for &a in fs {
            for &b in fs {
                if a != b {
                    nbrs[a].push(b);
                }
            }
        }
    }
    let mut seen = vec![false; n_facets];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(f) = queue.pop_front() {
        for &g in &nbrs[f] {
            if !seen[g] {
                seen[g] = true;
                count += 1;
                queue.push_back(g);
            }
        }
    }
    count == n_facets
}

/// Orientation propagation over facets sharing a 1-simplex. Requires every
/// 1-simplex to lie in at most two facets and the facets to be connected.
fn propagate_orientation(facets: &[Triple], inc: &Incidence) -> bool {
    let mut sign: Vec<i8> = vec![0; facets.len()];
    let mut nbrs: Vec<Vec<(usize, Pair)>> = vec![Vec::new(); facets.len()];
    for (&e, fs) in &inc.edge_facets {
        if let [a, b] = fs[..] {
            nbrs[a].push((b, e));
            nbrs[b].push((a, e));
        }
    }
    for root in 0..facets.len() {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            for &(g, (v, w)) in &nbrs[f] {
                // Shared edge must be traversed in opposite directions.
                let want = -sign[f] * edge_sign(&facets[f], v, w) * edge_sign(&facets[g], v, w);
                if sign[g] == 0 {
                    sign[g] = want;
                    queue.push_back(g);
                } else if sign[g] != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Cycles formed by 1-simplices lying in exactly one facet. Assumes the
/// manifold checks passed, so every boundary vertex has boundary degree two.
fn boundary_cycles(inc: &Incidence) -> Vec<BoundaryWalk> {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (&(a, b), fs) in &inc.edge_facets {
        if fs.len() == 1 {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut visited: BTreeMap<Vertex, bool> = adj.keys().map(|&v| (v, false)).collect();
    let mut walks = Vec::new();
    let starts: Vec<Vertex> = adj.keys().copied().collect();
    for start in starts {
        if visited[&start] {
            continue;
        }
        let mut walk = vec![start];
        visited.insert(start, true);
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            walk.push(cur);
            visited.insert(cur, true);
            let next = adj[&cur].iter().copied().find(|&x| x != prev).unwrap_or(start);
            prev = cur;
            cur = next;
        }
        walks.push(BoundaryWalk(walk));
    }
    walks
}

/// Classifies the complex generated by `x`'s facets.
pub fn classify(x: &Complex2) -> SurfaceReport {
    let facets = x.facets();
    let inc = incidence(facets);
    let vertex_count = inc.links.len();
    let edge_count = inc.edge_facets.len();
    let facet_count = facets.len();
    let euler_char = vertex_count as i64 - edge_count as i64 + facet_count as i64;
    let connected = facets_connected(facet_count, &inc);
    let not_surface = |reason| SurfaceReport {
        vertex_count,
        edge_count,
        facet_count,
        euler_char,
        connected,
        boundary: Vec::new(),
        orientable: None,
        verdict: Verdict::NotASurface(reason),
    };

    if facets.is_empty() {
        return not_surface(NotSurfaceReason::Empty);
    }
    if inc.edge_facets.values().any(|fs| fs.len() > 2) {
        return not_surface(NotSurfaceReason::BadEdgeDegree);
    }
    if !inc.links.values().all(|l| link_is_path_or_cycle(l)) {
        return not_surface(NotSurfaceReason::BadLink);
    }
    if !connected {
        return not_surface(NotSurfaceReason::Disconnected);
    }

    let orientable = propagate_orientation(facets, &inc);
    let boundary = boundary_cycles(&inc);
    let verdict = if boundary.is_empty() {
        match (orientable, euler_char) {
            (true, 2) => Verdict::Sphere,
            (true, chi) => Verdict::Torus {
                genus: ((2 - chi) / 2) as u32,
            },
            (false, chi) => Verdict::NonOrientable {
                crosscaps: (2 - chi) as u32,
            },
        }
    } else if boundary.len() == 1 && euler_char == 1 {
        Verdict::Disk
    } else {
        Verdict::SurfaceWithBoundary {
            chi: euler_char,
            orientable,
            boundary_components: boundary.len(),
        }
    };
    SurfaceReport {
        vertex_count,
        edge_count,
        facet_count,
        euler_char,
        connected,
        boundary,
        orientable: Some(orientable),
        verdict,
    }
}

/// True iff no simplex spanned by boundary vertices lies outside the boundary.
pub fn has_induced_boundary(x: &Complex2) -> Result<bool, SurfaceError> {
    let report = classify(x);
    if !report.verdict.has_boundary() {
        return Err(match report.verdict {
            Verdict::NotASurface(r) => SurfaceError::NotASurface(r),
            v => SurfaceError::NoBoundary(v),
        });
    }
    Ok(induced_boundary_given(x, &report))
}

pub(crate) fn induced_boundary_given(x: &Complex2, report: &SurfaceReport) -> bool {
    let bverts = report.boundary_vertices();
    let mut bedges: Vec<Pair> = Vec::new();
    for w in &report.boundary {
        let vs = w.vertices();
        for i in 0..vs.len() {
            bedges.push(pair(vs[i], vs[(i + 1) % vs.len()]));
        }
    }
    bedges.sort_unstable();
    let edges_ok = x
        .edges()
        .into_iter()
        .filter(|&(a, b)| bverts.contains(a) && bverts.contains(b))
        .all(|e| bedges.binary_search(&e).is_ok());
    let facets_ok = !x
        .facets()
        .iter()
        .any(|t| t.vertices().iter().all(|&v| bverts.contains(v)));
    edges_ok && facets_ok
}

/// `V(X) \ V(∂X)`.
pub fn interior_vertices(x: &Complex2) -> Result<VertexSet, SurfaceError> {
    let report = classify(x);
    if let Verdict::NotASurface(r) = report.verdict {
        return Err(SurfaceError::NotASurface(r));
    }
    Ok(x.vertices().difference(&report.boundary_vertices()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(raw: &[[Vertex; 3]]) -> Complex2 {
        raw.iter().map(|&[a, b, c]| Triple::new(a, b, c).unwrap()).collect()
    }

    fn tetra() -> Complex2 {
        cx(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    }

    fn cone4() -> Complex2 {
        // Apex 4 over the 4-cycle 0-1-2-3.
        cx(&[[4, 0, 1], [4, 1, 2], [4, 2, 3], [4, 3, 0]])
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&tetra()), 2);
        assert_eq!(euler_characteristic(&cx(&[[0, 1, 2]])), 1);
        assert_eq!(euler_characteristic(&Complex2::default()), 0);
    }

    #[test]
    fn tetrahedron_is_sphere() {
        let r = classify(&tetra());
        assert_eq!(r.verdict, Verdict::Sphere);
        assert_eq!((r.vertex_count, r.edge_count, r.facet_count, r.euler_char), (4, 6, 4, 2));
        assert_eq!(r.orientable, Some(true));
        assert!(r.boundary.is_empty());
    }

    #[test]
    fn pinch_point_has_bad_link() {
        let r = classify(&cx(&[[0, 1, 2], [0, 3, 4]]));
        assert_eq!(r.verdict, Verdict::NotASurface(NotSurfaceReason::BadLink));
        assert_eq!(r.orientable, None);
    }

    #[test]
    fn other_failure_reasons() {
        let r = classify(&cx(&[[0, 1, 2], [0, 1, 3], [0, 1, 4]]));
        assert_eq!(r.verdict, Verdict::NotASurface(NotSurfaceReason::BadEdgeDegree));
        let r = classify(&cx(&[[0, 1, 2], [3, 4, 5]]));
        assert_eq!(r.verdict, Verdict::NotASurface(NotSurfaceReason::Disconnected));
        let r = classify(&Complex2::default());
        assert_eq!(r.verdict, Verdict::NotASurface(NotSurfaceReason::Empty));
        assert!(r.to_json().contains("\"reason\":\"empty\""));
    }

    #[test]
    fn triangle_and_cone_are_disks() {
        let r = classify(&cx(&[[0, 1, 2]]));
        assert_eq!(r.verdict, Verdict::Disk);
        let r = classify(&cone4());
        assert_eq!(r.verdict, Verdict::Disk);
        assert!(r.boundary[0].matches_cycle(&[0, 1, 2, 3]));
        assert!(r.boundary[0].matches_cycle(&[2, 1, 0, 3]));
        assert!(!r.boundary[0].matches_cycle(&[0, 2, 1, 3]));
    }

    #[test]
    fn annulus_is_surface_with_boundary() {
        // Triangulated annulus between 0-1-2 and 3-4-5.
        let x = cx(&[
            [0, 1, 3],
            [1, 3, 4],
            [1, 2, 4],
            [2, 4, 5],
            [2, 0, 5],
            [0, 5, 3],
        ]);
        let r = classify(&x);
        assert_eq!(
            r.verdict,
            Verdict::SurfaceWithBoundary {
                chi: 0,
                orientable: true,
                boundary_components: 2
            }
        );
    }

    #[test]
    fn induced_boundary_examples() {
        assert_eq!(has_induced_boundary(&cone4()), Ok(true));
        assert_eq!(has_induced_boundary(&cx(&[[0, 1, 2]])), Ok(false));
        // Adding 0-1-3 glues a triangle along 0-1 and 0-3: still a disk, but
        // vertex 0 becomes interior and the boundary shrinks to 1-2-3.
        let mut f = cone4().facets().to_vec();
        f.push(Triple::new(0, 1, 3).unwrap());
        let x = Complex2::new(f);
        let r = classify(&x);
        assert_eq!(r.verdict, Verdict::Disk);
        assert!(r.boundary[0].matches_cycle(&[1, 2, 3]));
        assert_eq!(has_induced_boundary(&x), Ok(true));
        // A square split by the diagonal 0-2: the chord spans boundary vertices.
        assert_eq!(has_induced_boundary(&cx(&[[0, 1, 2], [0, 2, 3]])), Ok(false));
        assert_eq!(has_induced_boundary(&tetra()), Err(SurfaceError::NoBoundary(Verdict::Sphere)));
    }

    #[test]
    fn interior_vertex_examples() {
        assert_eq!(interior_vertices(&cone4()).unwrap(), VertexSet::from([4]));
        assert_eq!(interior_vertices(&tetra()).unwrap(), VertexSet::from([0, 1, 2, 3]));
        assert!(interior_vertices(&cx(&[[0, 1, 2], [0, 3, 4]])).is_err());
    }

    #[test]
    fn json_field_order_is_stable() {
        let json = classify(&tetra()).to_json();
        assert_eq!(
            json,
            r#"{"V":4,"E":6,"F":4,"chi":2,"connected":true,"boundary_components":0,"orientable":true,"verdict":"Sphere"}"#
        );
    }
}
