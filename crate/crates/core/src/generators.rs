//! Random hypergraphs, named surface fixtures and planted instances.

use rand::seq::{index, SliceRandom};
use serde::Serialize;
use thiserror::Error;

use crate::builder::{disk_facets, DiskPatch, Rp2Parts};
use crate::hypergraph::{pair, Hypergraph3, Triple, Vertex, VertexSet};
use crate::paths::Cycle;
use crate::rng::stream_rng;
use crate::surface::{classify, Complex2, NotSurfaceReason, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("{m} edges requested but only {max} triples exist on {n} vertices")]
    TooManyEdges { n: usize, m: u64, max: u64 },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Triple with colexicographic rank `x`.
fn unrank_triple(mut x: u64) -> [Vertex; 3] {
    let mut out = [0; 3];
    for (slot, k) in [(2, 3u64), (1, 2), (0, 1)] {
        let mut c = k - 1;
        while binomial(c + 1, k) <= x {
            c += 1;
        }
        x -= binomial(c, k);
        out[slot] = c as Vertex;
    }
    out
}

/// Uniformly random `m`-subset of all triples on `n` vertices.
pub fn random_hypergraph(n: usize, m: usize, seed: u64) -> Result<Hypergraph3, GeneratorError> {
    let max = binomial(n as u64, 3);
    if m as u64 > max {
        return Err(GeneratorError::TooManyEdges { n, m: m as u64, max });
    }
    let mut rng = stream_rng(seed, 0);
    let edges = index::sample(&mut rng, max as usize, m).into_iter().map(|x| {
        let [a, b, c] = unrank_triple(x as u64);
        Triple::new(a, b, c).expect("distinct by construction")
    });
    Ok(Hypergraph3::new(n, edges).expect("in range by construction"))
}

/// A named complex with its known classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fixture {
    pub name: String,
    pub facets: Complex2,
    #[serde(serialize_with = "display")]
    pub expected: Verdict,
}

fn display<S: serde::Serializer>(v: &Verdict, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub const FIXTURE_NAMES: [&str; 9] = [
    "tetra_sphere",
    "octa_sphere",
    "hemi_icosahedron_rp2",
    "csaszar_torus",
    "klein_bottle",
    "cone_disk",
    "pinch_point",
    "triple_edge",
    "double_pyramid_k",
];

fn complex(raw: &[[Vertex; 3]]) -> Complex2 {
    raw.iter().map(|&[a, b, c]| Triple::new(a, b, c).expect("fixture triple")).collect()
}

/// Triangulated `rows x cols` grid with periodic identifications. The row
/// wrap is plain; the column wrap reflects the row index when `twisted`.
pub fn grid_surface(rows: i64, cols: i64, twisted: bool) -> Complex2 {
    let label = |i: i64, j: i64| -> Vertex {
        let (i, j) = if j >= cols {
            (if twisted { -i } else { i }, j - cols)
        } else {
            (i, j)
        };
        (i.rem_euclid(rows) * cols + j) as Vertex
    };
    let mut facets = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let (p00, p10, p01, p11) = (label(i, j), label(i + 1, j), label(i, j + 1), label(i + 1, j + 1));
            facets.push(Triple::new(p00, p10, p11).expect("grid triangle"));
            facets.push(Triple::new(p00, p01, p11).expect("grid triangle"));
        }
    }
    Complex2::new(facets)
}

fn double_pyramid(k: usize) -> Complex2 {
    let k = k as Vertex;
    (0..k)
        .flat_map(|i| {
            let e = pair(2 + i, 2 + (i + 1) % k);
            [Triple::cone(0, e), Triple::cone(1, e)]
        })
        .collect()
}

/// Looks up a fixture by name; `double_pyramid_<k>` selects the cycle length (default 6).
pub fn fixture(name: &str) -> Result<Fixture, GeneratorError> {
    let (facets, expected) = match name {
        "tetra_sphere" => (complex(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]), Verdict::Sphere),
        "octa_sphere" => {
            let mut f = Vec::new();
            for a in [0, 1] {
                for b in [2, 3] {
                    for c in [4, 5] {
                        f.push([a, b, c]);
                    }
                }
            }
            (complex(&f), Verdict::Sphere)
        }
        "hemi_icosahedron_rp2" => (
            complex(&[[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]]),
            Verdict::NonOrientable { crosscaps: 1 },
        ),
        "csaszar_torus" => {
            let mut f = Vec::new();
            for i in 0..7 {
                f.push([i, (i + 1) % 7, (i + 3) % 7]);
                f.push([i, (i + 2) % 7, (i + 3) % 7]);
            }
            (complex(&f), Verdict::Torus { genus: 1 })
        }
        "klein_bottle" => (grid_surface(3, 4, true), Verdict::NonOrientable { crosscaps: 2 }),
        "cone_disk" => (complex(&[[4, 0, 1], [4, 1, 2], [4, 2, 3], [4, 3, 0]]), Verdict::Disk),
        "pinch_point" => (complex(&[[0, 1, 2], [0, 3, 4]]), Verdict::NotASurface(NotSurfaceReason::BadLink)),
        "triple_edge" => (
            complex(&[[0, 1, 2], [0, 1, 3], [0, 1, 4]]),
            Verdict::NotASurface(NotSurfaceReason::BadEdgeDegree),
        ),
        other => {
            let k = match other.strip_prefix("double_pyramid_") {
                Some("k") => 6,
                Some(k) => k
                    .parse::<usize>()
                    .map_err(|_| GeneratorError::UnknownFixture(other.to_string()))?,
                None => return Err(GeneratorError::UnknownFixture(other.to_string())),
            };
            if k < 3 {
                return Err(GeneratorError::InvalidSize("double pyramid needs a cycle of length >= 3".into()));
            }
            (double_pyramid(k), Verdict::Sphere)
        }
    };
    Ok(Fixture {
        name: name.to_string(),
        facets,
        expected,
    })
}

/// Random relabeling of `0..n`.
fn permutation(n: usize, seed: u64) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut stream_rng(seed, 1));
    perm
}

/// A hypergraph made of exactly the facets of a projective-plane gluing, with its parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedRp2 {
    pub hypergraph: Hypergraph3,
    pub u: Vertex,
    pub u2: Vertex,
    pub v0: Vertex,
    pub v1: Vertex,
    pub v2: Vertex,
    pub v3: Vertex,
    pub c: Cycle,
    pub c2: Cycle,
    pub d: DiskPatch,
    pub d2: DiskPatch,
}

impl PlantedRp2 {
    pub fn parts(&self) -> Rp2Parts<'_> {
        Rp2Parts {
            u: self.u,
            u2: self.u2,
            c: &self.c,
            c2: &self.c2,
            d: &self.d,
            d2: &self.d2,
            v0: self.v0,
            v1: self.v1,
            v2: self.v2,
            v3: self.v3,
        }
    }
}

/// Planted gluing with `|C| = len_c`, `|C'| = len_c2` and disks whose fan paths have `s` and `t` interior vertices.
pub fn planted_make_rp_instance(
    len_c: usize,
    len_c2: usize,
    s: usize,
    t: usize,
    seed: u64,
) -> Result<PlantedRp2, GeneratorError> {
    if len_c < 4 || len_c2 < 3 || s == 0 || t == 0 {
        return Err(GeneratorError::InvalidSize(
            "need |C| >= 4, |C'| >= 3 and s, t >= 1".into(),
        ));
    }
    let n = 6 + (len_c - 3) + (len_c2 - 2) + 2 * (1 + s + t);
    let perm = permutation(n, seed);
    let mut next = 0;
    let mut fresh = |count: usize| -> Vec<Vertex> {
        let out = perm[next..next + count].to_vec();
        next += count;
        out
    };
    let roles = fresh(6);
    let [u, u2, v0, v1, v2, v3] = [roles[0], roles[1], roles[2], roles[3], roles[4], roles[5]];
    let mut c = vec![v0, v2];
    c.extend(fresh(len_c - 3));
    c.push(v1);
    let mut c2 = vec![v0, v3];
    c2.extend(fresh(len_c2 - 2));
    let mut disk = |x: Vertex, y: Vertex, x2: Vertex| {
        let w = fresh(1)[0];
        let mut p = vec![y];
        p.extend(fresh(s));
        p.push(v0);
        let mut q = vec![y];
        q.extend(fresh(t));
        q.push(v0);
        DiskPatch::new(disk_facets(x, x2, w, &p, &q), &[y, x, v0, x2]).expect("planted disk is valid")
    };
    let d = disk(v1, u, v3);
    let d2 = disk(v2, u2, v3);
    let c = Cycle::new(c).expect("fresh labels");
    let c2 = Cycle::new(c2).expect("fresh labels");

    let mut facets: Vec<Triple> = Vec::new();
    let edges: Vec<_> = c.edges().into_iter().chain(c2.edges()).collect();
    for (apex, skip) in [(u, [pair(v0, v1), pair(v0, v3)]), (u2, [pair(v0, v2), pair(v0, v3)])] {
        facets.extend(edges.iter().filter(|e| !skip.contains(e)).map(|&e| Triple::cone(apex, e)));
    }
    facets.extend(d.facets.facets());
    facets.extend(d2.facets.facets());
    Ok(PlantedRp2 {
        hypergraph: Hypergraph3::new(n, facets).expect("labels below n"),
        u,
        u2,
        v0,
        v1,
        v2,
        v3,
        c,
        c2,
        d,
        d2,
    })
}

/// Neighboring hyperedges `xyz`, `x2 y z` with a known set of witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedSemi {
    pub hypergraph: Hypergraph3,
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub x2: Vertex,
    pub witnesses: VertexSet,
}

impl PlantedSemi {
    pub fn e(&self) -> Triple {
        Triple::new(self.x, self.y, self.z).expect("distinct")
    }

    pub fn f(&self) -> Triple {
        Triple::new(self.x2, self.y, self.z).expect("distinct")
    }

    /// Every vertex except `x, y, z, x2`.
    pub fn eligible(&self) -> VertexSet {
        (0..self.hypergraph.n() as Vertex)
            .filter(|&v| ![self.x, self.y, self.z, self.x2].contains(&v))
            .collect()
    }
}

/// Exactly `r` witnesses, each with `k + 2` disjoint two-step `y–z` paths in both of its pair links.
pub fn planted_semi_admissible(r: usize, k: usize, seed: u64) -> Result<PlantedSemi, GeneratorError> {
    if r == 0 || k == 0 {
        return Err(GeneratorError::InvalidSize("r and k must be at least 1".into()));
    }
    planted_semi_admissible_with_fans(r, k + 2, seed)
}

/// As [`planted_semi_admissible`] with an explicit fan size per witness and side.
pub fn planted_semi_admissible_with_fans(r: usize, fan: usize, seed: u64) -> Result<PlantedSemi, GeneratorError> {
    if r == 0 || fan == 0 {
        return Err(GeneratorError::InvalidSize("r and the fan size must be at least 1".into()));
    }
    let n = 4 + r * (1 + 2 * fan);
    let perm = permutation(n, seed);
    let (x, x2, y, z) = (perm[0], perm[1], perm[2], perm[3]);
    let mut next = 4;
    let mut edges = vec![Triple::new(x, y, z).expect("distinct"), Triple::new(x2, y, z).expect("distinct")];
    let mut witnesses = VertexSet::new();
    for _ in 0..r {
        let w = perm[next];
        next += 1;
        witnesses.insert(w);
        edges.push(Triple::new(w, y, z).expect("distinct"));
        for side in [x, x2] {
            for _ in 0..fan {
                let a = perm[next];
                next += 1;
                for apex in [side, w] {
                    edges.push(Triple::new(apex, y, a).expect("distinct"));
                    edges.push(Triple::new(apex, a, z).expect("distinct"));
                }
            }
        }
    }
    Ok(PlantedSemi {
        hypergraph: Hypergraph3::new(n, edges).expect("labels below n"),
        x,
        y,
        z,
        x2,
        witnesses,
    })
}

/// Sparse random hypergraph plus two vertices whose common link contains a clique of `clique` vertices.
pub fn planted_dense_pair(
    n: usize,
    clique: usize,
    noise: usize,
    seed: u64,
) -> Result<(Hypergraph3, Vertex, Vertex), GeneratorError> {
    if clique + 2 > n {
        return Err(GeneratorError::InvalidSize("clique does not fit".into()));
    }
    let base = random_hypergraph(n, noise, seed)?;
    let perm = permutation(n, seed);
    let (u, u2) = (perm[0], perm[1]);
    let members = &perm[2..2 + clique];
    let mut edges = base.edges().to_vec();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            edges.push(Triple::cone(u, pair(a, b)));
            edges.push(Triple::cone(u2, pair(a, b)));
        }
    }
    Ok((Hypergraph3::new(n, edges).expect("labels below n"), u, u2))
}

/// Classifies a fixture; convenience for callers that only need the verdict.
pub fn fixture_verdict(f: &Fixture) -> Verdict {
    classify(&f.facets).verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::{semi_admissible, AdmissibilityParams};
    use crate::builder::{assemble_rp2, check_rp2_hypotheses, find_dense_pair};
    use crate::paths::disjoint_paths;
    use crate::surface::euler_characteristic;

    #[test]
    fn unranking_covers_every_triple_once() {
        let n = 9u64;
        let mut seen: Vec<[Vertex; 3]> = (0..binomial(n, 3)).map(unrank_triple).collect();
        assert!(seen.iter().all(|t| t[0] < t[1] && t[1] < t[2] && (t[2] as u64) < n));
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len() as u64, binomial(n, 3));
    }

    #[test]
    fn random_hypergraph_examples() {
        assert_eq!(random_hypergraph(5, 10, 3).unwrap(), Hypergraph3::complete(5));
        assert_eq!(random_hypergraph(10, 0, 3).unwrap().edge_count(), 0);
        assert_eq!(random_hypergraph(20, 100, 9).unwrap(), random_hypergraph(20, 100, 9).unwrap());
        assert_eq!(random_hypergraph(20, 100, 9).unwrap().edge_count(), 100);
        assert!(matches!(random_hypergraph(10, 999, 0), Err(GeneratorError::TooManyEdges { .. })));
    }

    #[test]
    fn fixtures_match_expected_verdicts() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap();
            assert_eq!(fixture_verdict(&f), f.expected, "{name}");
        }
        assert!(fixture("nope").is_err());
        assert_eq!(fixture("double_pyramid_9").unwrap().facets.facet_count(), 18);
    }

    #[test]
    fn fixture_sizes() {
        let hemi = fixture("hemi_icosahedron_rp2").unwrap().facets;
        assert_eq!((hemi.vertices().len(), hemi.edges().len(), hemi.facet_count()), (6, 15, 10));
        let torus = fixture("csaszar_torus").unwrap().facets;
        assert_eq!((torus.vertices().len(), torus.edges().len(), torus.facet_count()), (7, 21, 14));
        let klein = fixture("klein_bottle").unwrap().facets;
        assert!(klein.vertices().len() >= 8);
        assert_eq!(euler_characteristic(&klein), 0);
    }

    #[test]
    fn untwisted_grid_is_a_torus() {
        assert_eq!(classify(&grid_surface(3, 4, false)).verdict, Verdict::Torus { genus: 1 });
    }

    #[test]
    fn planted_rp2_examples() {
        for (a, b, s, t) in [(5, 4, 1, 1), (4, 3, 1, 1), (12, 10, 5, 5)] {
            let inst = planted_make_rp_instance(a, b, s, t, 11).unwrap();
            check_rp2_hypotheses(&inst.parts()).unwrap();
            let x = assemble_rp2(&inst.parts()).unwrap();
            let expected = 2 * (a + b - 2) + inst.d.facets.facet_count() + inst.d2.facets.facet_count();
            assert_eq!(x.facet_count(), expected);
            assert_eq!(euler_characteristic(&x), 1);
            assert_eq!(Complex2::from_hypergraph(&inst.hypergraph), x);
        }
        assert!(planted_make_rp_instance(3, 3, 1, 1, 0).is_err());
    }

    #[test]
    fn planted_semi_examples() {
        let inst = planted_semi_admissible(1, 1, 5).unwrap();
        let params = AdmissibilityParams::new(1.0, 0.5, 1, 1).unwrap();
        let out = semi_admissible(&inst.hypergraph, &inst.e(), &inst.f(), &params, 0).unwrap();
        assert!(out.holds);
        for w in out.witnesses.iter() {
            let g = inst.hypergraph.pair_link(inst.x, w).unwrap();
            let u: VertexSet = g.vertices().filter(|&v| v != inst.y && v != inst.z).collect();
            assert!(disjoint_paths(&g, inst.y, inst.z, &u, 3).unwrap().is_some());
        }

        let inst = planted_semi_admissible(4, 2, 5).unwrap();
        assert_eq!(inst.witnesses.len(), 4);
        let params = AdmissibilityParams::new(1.0, 0.5, 4, 4).unwrap();
        let out = semi_admissible(&inst.hypergraph, &inst.e(), &inst.f(), &params, 0).unwrap();
        assert!(out.holds);
        assert_eq!(out.witnesses, inst.witnesses);
        let out = semi_admissible(&inst.hypergraph, &inst.e(), &inst.f(), &params.with_r(5), 0).unwrap();
        assert!(!out.holds);
        // Fan size k + 2: five paths are too many.
        let out = semi_admissible(&inst.hypergraph, &inst.e(), &inst.f(), &params.with_k(5), 0).unwrap();
        assert!(out.witnesses.is_empty());
    }

    #[test]
    fn planted_dense_pair_is_recovered() {
        let (h, u, u2) = planted_dense_pair(30, 12, 60, 4).unwrap();
        let dp = find_dense_pair(&h, None, 4.0, true).unwrap();
        assert_eq!((dp.u, dp.u2), (u.min(u2), u.max(u2)));
    }
}
