use serde::Serialize;

use super::pipeline::{SearchConfig, StageCounters};
use super::DiskPatch;
use crate::admissibility::SemiAdmissibility;
use crate::hypergraph::{pair, Hypergraph3, Pair, Triple, Vertex, VertexSet};
use crate::paths::Cycle;
use crate::surface::{classify, cyclic_eq, Complex2, SurfaceReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Roles {
    pub u: Vertex,
    /// The second apex.
    pub u1: Vertex,
    pub v0: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycles {
    #[serde(rename = "C")]
    pub c: Cycle,
    #[serde(rename = "Cprime")]
    pub cprime: Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disks {
    #[serde(rename = "D")]
    pub d: DiskPatch,
    #[serde(rename = "Dprime")]
    pub dprime: DiskPatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    #[serde(rename = "U1")]
    pub u1: VertexSet,
    #[serde(rename = "U2")]
    pub u2: VertexSet,
    #[serde(rename = "U3")]
    pub u3: VertexSet,
    #[serde(rename = "U4")]
    pub u4: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemiAudit {
    pub holds: bool,
    pub witnesses: usize,
    pub candidates: usize,
}

impl From<&SemiAdmissibility> for SemiAudit {
    fn from(s: &SemiAdmissibility) -> Self {
        SemiAudit {
            holds: s.holds,
            witnesses: s.witnesses.len(),
            candidates: s.candidates,
        }
    }
}

/// Which worst-case conditions held for this run; in lenient mode none of them gate the search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Audit {
    pub strict: bool,
    pub attempt: usize,
    pub counters: StageCounters,
    pub pair_link_edges: usize,
    pub density_threshold: f64,
    pub meets_density: bool,
    pub apex_certified: bool,
    pub apex_probabilities: [f64; 2],
    pub apex_degree: usize,
    pub semi_d: SemiAudit,
    pub semi_dprime: SemiAudit,
}

/// A projective plane found inside a hypergraph, with every part of its construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub facets: Complex2,
    pub roles: Roles,
    pub cycles: Cycles,
    pub disks: Disks,
    pub partition: Partition,
    pub config: SearchConfig,
    /// Sub-seed of the successful attempt.
    pub seed: u64,
    pub report: SurfaceReport,
    pub audit: Audit,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub ok: bool,
    pub failures: Vec<String>,
}

fn cycle_edges(c: &[Vertex]) -> Vec<Pair> {
    (0..c.len()).map(|i| pair(c[i], c[(i + 1) % c.len()])).collect()
}

fn is_simple_cycle(c: &[Vertex]) -> bool {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    c.len() >= 3 && s.len() == c.len()
}

fn next_to(c: &[Vertex], a: Vertex, b: Vertex) -> bool {
    cycle_edges(c).contains(&pair(a, b))
}

/// Re-checks a certificate from scratch against `h`.
pub fn verify_certificate(h: &Hypergraph3, cert: &Certificate) -> CertificateCheck {
    let mut failures = Vec::new();
    let mut fail = |m: String| failures.push(m);

    for t in cert.facets.facets() {
        if !h.contains(t) {
            fail(format!("facet not in hypergraph: {t:?}"));
        }
    }
    let report = classify(&cert.facets);
    if !report.verdict.is_closed_surface() {
        fail(format!("not a closed surface: {}", report.verdict));
    } else if !report.verdict.is_rp2() {
        fail(format!("closed surface is not RP2: {}", report.verdict));
    }
    if report != cert.report {
        fail("recorded report differs from classification".into());
    }

    let Roles { u, u1, v0, v1, v2, v3 } = cert.roles;
    let mut roles = [u, u1, v0, v1, v2, v3];
    roles.sort_unstable();
    if roles.windows(2).any(|w| w[0] == w[1]) {
        fail("vertices not distinct".into());
    }
    let c = cert.cycles.c.vertices();
    let c2 = cert.cycles.cprime.vertices();
    if !is_simple_cycle(c) || !is_simple_cycle(c2) {
        fail("cycle is not simple".into());
    }
    if !(next_to(c, v1, v0) && next_to(c, v0, v2)) {
        fail("v1 v0 v2 is not a subpath of C".into());
    }
    if !next_to(c2, v0, v3) {
        fail("v0 v3 is not an edge of C'".into());
    }
    for &(a, b) in cycle_edges(c).iter().chain(cycle_edges(c2).iter()) {
        let both = [u, u1].iter().all(|&apex| Triple::new(apex, a, b).is_ok_and(|t| h.contains(&t)));
        if !both {
            fail(format!("cycle edge {a}-{b} is not in the common link of u and u'"));
        }
    }

    for (disk, name, boundary) in [
        (&cert.disks.d, "D", [v0, v1, u, v3]),
        (&cert.disks.dprime, "D'", [v0, v2, u1, v3]),
    ] {
        let r = classify(&disk.facets);
        if r.verdict != Verdict::Disk {
            fail(format!("{name} is not a disk"));
            continue;
        }
        if !cyclic_eq(r.boundary[0].vertices(), &boundary) || !cyclic_eq(disk.boundary.vertices(), &boundary) {
            fail(format!("boundary of {name} is wrong"));
        }
        let bverts = r.boundary_vertices();
        let bedges = cycle_edges(r.boundary[0].vertices());
        let chord = disk.facets.edges().into_iter().any(|(a, b)| {
            bverts.contains(a) && bverts.contains(b) && !bedges.contains(&pair(a, b))
        });
        let flat = disk.facets.facets().iter().any(|t| t.vertices().iter().all(|&v| bverts.contains(v)));
        if chord || flat {
            fail(format!("{name} does not have induced boundary"));
        }
        if disk.interior != disk.facets.vertices().difference(&bverts) {
            fail(format!("interior of {name} is wrong"));
        }
    }

    let w = VertexSet::from([u, u1, v0, v1, v3]);
    let rest_c: VertexSet = c.iter().copied().filter(|&v| v != v0 && v != v1).collect();
    let rest_c2: VertexSet = c2.iter().copied().filter(|&v| v != v0 && v != v3).collect();
    let sets = [&rest_c, &rest_c2, &cert.disks.d.interior, &cert.disks.dprime.interior, &w];
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(sets[j]) {
                fail(format!("disjointness fails for sets {i} and {j}"));
            }
        }
    }
    let p = &cert.partition;
    let homes = [(&rest_c, &p.u1, "U1"), (&rest_c2, &p.u2, "U2"), (&cert.disks.d.interior, &p.u3, "U3"), (&cert.disks.dprime.interior, &p.u4, "U4")];
    for (set, home, name) in homes {
        if !set.is_subset(home) {
            fail(format!("part leaves {name}"));
        }
    }

    let mut glued: Vec<Triple> = Vec::new();
    let all_edges: Vec<Pair> = cycle_edges(c).into_iter().chain(cycle_edges(c2)).collect();
    for (apex, skip) in [(u, [pair(v0, v1), pair(v0, v3)]), (u1, [pair(v0, v2), pair(v0, v3)])] {
        for &(a, b) in all_edges.iter().filter(|e| !skip.contains(e)) {
            if let Ok(t) = Triple::new(apex, a, b) {
                glued.push(t);
            }
        }
    }
    glued.extend(cert.disks.d.facets.facets());
    glued.extend(cert.disks.dprime.facets.facets());
    if Complex2::new(glued) != cert.facets {
        fail("facets differ from the gluing of the recorded parts".into());
    }

    CertificateCheck {
        ok: failures.is_empty(),
        failures,
    }
}
