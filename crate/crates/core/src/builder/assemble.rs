use super::{precondition, BuildError, DiskPatch};
use crate::hypergraph::{pair, Pair, Triple, Vertex, VertexSet};
use crate::paths::Cycle;
use crate::surface::{classify, cyclic_eq, induced_boundary_given, Complex2, Verdict};

/// Everything the projective-plane gluing consumes.
#[derive(Clone, Copy, Debug)]
pub struct Rp2Parts<'a> {
    pub u: Vertex,
    pub u2: Vertex,
    pub c: &'a Cycle,
    pub c2: &'a Cycle,
    pub d: &'a DiskPatch,
    pub d2: &'a DiskPatch,
    pub v0: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
}

impl Rp2Parts<'_> {
    pub fn apex_set(&self) -> VertexSet {
        VertexSet::from([self.u, self.u2, self.v0, self.v1, self.v3])
    }
}

/// Checks every hypothesis of the gluing, naming the first violated clause.
pub fn check_rp2_hypotheses(parts: &Rp2Parts<'_>) -> Result<(), BuildError> {
    let Rp2Parts { u, u2, c, c2, d, d2, v0, v1, v2, v3 } = *parts;
    let mut roles = [u, u2, v0, v1, v2, v3];
    roles.sort_unstable();
    if roles.windows(2).any(|w| w[0] == w[1]) {
        return precondition("vertices not distinct");
    }
    if !c.has_subpath(v1, v0, v2) {
        return precondition("v1 v0 v2 is not a subpath of C");
    }
    if !c2.has_edge(v0, v3) {
        return precondition("v0 v3 is not an edge of C'");
    }
    for (disk, name, expected) in [(d, "D", [v0, v1, u, v3]), (d2, "D'", [v0, v2, u2, v3])] {
        let report = classify(&disk.facets);
        if report.verdict != Verdict::Disk {
            return precondition(format!("{name} is not a disk"));
        }
        if !cyclic_eq(report.boundary[0].vertices(), &expected) {
            return precondition(format!("boundary of {name} is not {expected:?}"));
        }
        if !induced_boundary_given(&disk.facets, &report) {
            return precondition(format!("{name} does not have induced boundary"));
        }
        if disk.interior != disk.facets.vertices().difference(&report.boundary_vertices()) {
            return precondition(format!("declared interior of {name} is wrong"));
        }
    }
    let mut rest_c = c.vertex_set();
    rest_c.remove(v0);
    rest_c.remove(v1);
    let mut rest_c2 = c2.vertex_set();
    rest_c2.remove(v0);
    rest_c2.remove(v3);
    let w = parts.apex_set();
    let sets = [
        ("V(C) minus v0 v1", &rest_c),
        ("V(C') minus v0 v3", &rest_c2),
        ("interior of D", &d.interior),
        ("interior of D'", &d2.interior),
        ("W", &w),
    ];
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].1.is_disjoint(sets[j].1) {
                if i == 2 && j == 3 {
                    return precondition("interior sets intersect");
                }
                return precondition(format!("{} and {} intersect", sets[i].0, sets[j].0));
            }
        }
    }
    Ok(())
}

/// Glues two cones over the cycles and the two disks into a projective plane.
///
/// The cone from `u` runs over every edge of `C ∪ C'` except `v0v1` and `v0v3`;
/// the cone from `u2` skips `v0v2` and `v0v3` instead.
pub fn assemble_rp2(parts: &Rp2Parts<'_>) -> Result<Complex2, BuildError> {
    check_rp2_hypotheses(parts)?;
    let Rp2Parts { u, u2, c, c2, d, d2, v0, v1, v2, v3 } = *parts;
    let mut edges: Vec<Pair> = c.edges();
    edges.extend(c2.edges());
    let cone = |apex: Vertex, skip: [Pair; 2]| {
        edges
            .iter()
            .filter(move |e| !skip.contains(e))
            .map(move |&e| Triple::cone(apex, e))
    };
    let facets: Vec<Triple> = cone(u, [pair(v0, v1), pair(v0, v3)])
        .chain(cone(u2, [pair(v0, v2), pair(v0, v3)]))
        .chain(d.facets.facets().iter().copied())
        .chain(d2.facets.facets().iter().copied())
        .collect();
    let expected = 2 * (c.len() + c2.len() - 2) + d.facets.facet_count() + d2.facets.facet_count();
    let complex = Complex2::new(facets);
    if complex.facet_count() != expected {
        return Err(BuildError::Defect(format!(
            "assembled {} facets, expected {expected}",
            complex.facet_count()
        )));
    }
    let report = classify(&complex);
    if !report.verdict.is_rp2() {
        return Err(BuildError::Defect(format!("assembled complex classified as {}", report.verdict)));
    }
    Ok(complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::disk_facets;
    use crate::surface::euler_characteristic;

    struct Owned {
        c: Cycle,
        c2: Cycle,
        d: DiskPatch,
        d2: DiskPatch,
    }

    // u=0 u'=1 v0=2 v1=3 v2=4 v3=5; C = 2 3 6 7 4 (length 5), C' = 2 5 8 9 (length 4);
    // D interior {10, 11, 12}, D' interior {13, 14, 15}.
    fn owned() -> Owned {
        let c = Cycle::new(vec![2, 3, 6, 7, 4]).unwrap();
        let c2 = Cycle::new(vec![2, 5, 8, 9]).unwrap();
        // D: pair (u v0 v1, u v0 v3) -> y=u, z=v0, x=v1, x'=v3.
        let d = DiskPatch::new(disk_facets(3, 5, 10, &[0, 11, 2], &[0, 12, 2]), &[2, 3, 0, 5]).unwrap();
        let d2 = DiskPatch::new(disk_facets(4, 5, 13, &[1, 14, 2], &[1, 15, 2]), &[2, 4, 1, 5]).unwrap();
        Owned { c, c2, d, d2 }
    }

    fn parts(o: &Owned) -> Rp2Parts<'_> {
        Rp2Parts { u: 0, u2: 1, c: &o.c, c2: &o.c2, d: &o.d, d2: &o.d2, v0: 2, v1: 3, v2: 4, v3: 5 }
    }

    #[test]
    fn minimal_configuration_is_rp2() {
        let o = owned();
        let x = assemble_rp2(&parts(&o)).unwrap();
        assert_eq!(x.facet_count(), 2 * (5 + 4 - 2) + 8 + 8);
        // 16 vertices; edges counted by hand: 3 per facet, each interior edge shared twice.
        assert_eq!(x.vertices().len(), 16);
        assert_eq!(euler_characteristic(&x), 1);
        let report = classify(&x);
        assert_eq!(report.orientable, Some(false));
        assert!(report.boundary.is_empty());
    }

    #[test]
    fn shared_interior_vertex_is_rejected() {
        let mut o = owned();
        o.d2 = DiskPatch::new(disk_facets(4, 5, 10, &[1, 14, 2], &[1, 15, 2]), &[2, 4, 1, 5]).unwrap();
        let err = assemble_rp2(&parts(&o)).unwrap_err();
        assert_eq!(err, BuildError::Precondition("interior sets intersect".into()));
    }

    #[test]
    fn repeated_role_is_rejected() {
        let o = owned();
        let mut p = parts(&o);
        p.v2 = p.v1;
        assert_eq!(
            assemble_rp2(&p).unwrap_err(),
            BuildError::Precondition("vertices not distinct".into())
        );
    }

    #[test]
    fn wrong_subpath_is_rejected() {
        let o = owned();
        let mut p = parts(&o);
        p.v2 = 6;
        assert!(matches!(assemble_rp2(&p), Err(BuildError::Precondition(m)) if m.contains("subpath")));
    }
}
