use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{precondition, BuildError};
use crate::hypergraph::{Hypergraph3, Triple, Vertex, VertexSet};
use crate::paths::path_through;
use crate::rng::stream_rng;
use crate::surface::{classify, cyclic_eq, induced_boundary_given, BoundaryWalk, Complex2, Verdict};

/// A triangulated disk with induced boundary, its boundary cycle and interior vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiskPatch {
    pub facets: Complex2,
    pub boundary: BoundaryWalk,
    pub interior: VertexSet,
}

impl DiskPatch {
    /// Checks that `facets` is a disk with induced boundary equal to `boundary` up to rotation and reflection.
    pub fn new(facets: Complex2, boundary: &[Vertex]) -> Result<Self, String> {
        let report = classify(&facets);
        if report.verdict != Verdict::Disk {
            return Err(format!("not a disk: verdict {}", report.verdict));
        }
        let walk = &report.boundary[0];
        if !cyclic_eq(walk.vertices(), boundary) {
            return Err(format!("boundary {:?} differs from {:?}", walk.vertices(), boundary));
        }
        if !induced_boundary_given(&facets, &report) {
            return Err("boundary is not induced".into());
        }
        let interior = facets.vertices().difference(&report.boundary_vertices());
        Ok(DiskPatch {
            facets,
            boundary: BoundaryWalk(boundary.to_vec()),
            interior,
        })
    }
}

/// Facets of the disk glued from two fans: `P = y a1 … as z` coned from
/// `x` and `w`, and `Q = y b1 … bt z` coned from `w` and `x2`.
pub fn disk_facets(x: Vertex, x2: Vertex, w: Vertex, p_path: &[Vertex], q_path: &[Vertex]) -> Complex2 {
    let mut facets = Vec::with_capacity(2 * (p_path.len() + q_path.len()));
    for pair in p_path.windows(2) {
        for apex in [x, w] {
            facets.push(Triple::new(apex, pair[0], pair[1]).expect("distinct disk vertices"));
        }
    }
    for pair in q_path.windows(2) {
        for apex in [w, x2] {
            facets.push(Triple::new(apex, pair[0], pair[1]).expect("distinct disk vertices"));
        }
    }
    Complex2::new(facets)
}

/// Inputs of a disk search around the neighboring hyperedges `xyz` and `x2 y z`.
#[derive(Clone, Copy, Debug)]
pub struct DiskRequest<'a> {
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub x2: Vertex,
    /// Vertices the interior may use.
    pub pool: &'a VertexSet,
    /// Vertices the interior must avoid.
    pub avoid: &'a VertexSet,
}

impl DiskRequest<'_> {
    fn check(&self, h: &Hypergraph3) -> Result<(), BuildError> {
        let DiskRequest { x, y, z, x2, pool, .. } = *self;
        let mut roles = [x, y, z, x2];
        roles.sort_unstable();
        if roles.windows(2).any(|w| w[0] == w[1]) {
            return precondition("x, y, z, x' must be distinct");
        }
        if !h.contains_vertices(x, y, z) || !h.contains_vertices(x2, y, z) {
            return precondition("xyz and x'yz must be hyperedges");
        }
        if [x, y, z, x2].iter().any(|&v| pool.contains(v)) {
            return precondition("x, y, z, x' must lie outside the vertex pool");
        }
        Ok(())
    }
}

/// Searches for the two-fan disk with boundary `y x z x2`, trying every
/// third hyperedge `wyz` with `w` in the pool.
pub fn build_disk_from_pair(
    h: &Hypergraph3,
    req: &DiskRequest<'_>,
    seed: u64,
) -> Result<Option<DiskPatch>, BuildError> {
    let all: Vec<Vertex> = h.common_neighbors(req.y, req.z);
    build_disk_with_candidates(h, req, &all, seed)
}

/// As [`build_disk_from_pair`], restricted to the given middle vertices `w`.
///
/// The pool is split in two by a fair coin; `P` runs through the first half
/// and `Q` through the second, so their interiors are disjoint by construction.
pub fn build_disk_with_candidates(
    h: &Hypergraph3,
    req: &DiskRequest<'_>,
    candidates: &[Vertex],
    seed: u64,
) -> Result<Option<DiskPatch>, BuildError> {
    req.check(h)?;
    let DiskRequest { x, y, z, x2, pool, avoid } = *req;
    let mut rng = stream_rng(seed, 0);
    let (mut first, mut second) = (VertexSet::new(), VertexSet::new());
    for v in pool.iter() {
        if rng.random_bool(0.5) {
            first.insert(v);
        } else {
            second.insert(v);
        }
    }
    let mut order: Vec<Vertex> = candidates
        .iter()
        .copied()
        .filter(|&w| w != x && w != x2 && pool.contains(w) && !avoid.contains(w))
        .filter(|&w| h.contains_vertices(w, y, z))
        .collect();
    order.sort_unstable();
    order.dedup();
    order.shuffle(&mut rng);

    let mut avoid_p = avoid.clone();
    avoid_p.insert(x2);
    let mut avoid_q = avoid.clone();
    avoid_q.insert(x);
    for w in order {
        let left = h.pair_link(x, w)?;
        let Some(p_path) = path_through(&left, y, z, &first, &avoid_p)? else {
            continue;
        };
        let right = h.pair_link(w, x2)?;
        let Some(q_path) = path_through(&right, y, z, &second, &avoid_q)? else {
            continue;
        };
        let facets = disk_facets(x, x2, w, &p_path, &q_path);
        let patch = DiskPatch::new(facets, &[y, x, z, x2]).map_err(BuildError::Defect)?;
        if !patch.interior.is_subset(&pool.difference(avoid)) {
            return Err(BuildError::Defect("disk interior leaves the vertex pool".into()));
        }
        if let Some(t) = patch.facets.facets().iter().find(|t| !h.contains(t)) {
            return Err(BuildError::Defect(format!("disk facet {t:?} is not a hyperedge")));
        }
        return Ok(Some(patch));
    }
    Ok(None)
}
