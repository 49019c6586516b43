use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::certificate::{Audit, Certificate, Cycles, Disks, Partition, Roles, SemiAudit};
use super::{assemble_rp2, build_disk_with_candidates, precondition, BuildError, DiskPatch, DiskRequest, Rp2Parts};
use crate::admissibility::{
    estimate_admissibility, filter_semi_admissible, semi_admissible, AdmissibilityParams, AdmissibilityVerdict,
    SemiAdmissibility,
};
use crate::hypergraph::{pair, Graph, Hypergraph3, Pair, Triple, Vertex, VertexSet};
use crate::paths::{cycle_with_edge, cycle_with_forced_second_vertex, find_cycle, Cycle};
use crate::rng::{derive_seed, stream_rng};
use crate::surface::{classify, Complex2, SurfaceReport, Verdict};

/// Attempts evaluated together; fixed so results never depend on the thread count.
const BATCH: usize = 8;

const TAG_ATTEMPT: u64 = 0xa77e;
const TAG_APEX: u64 = 0xa9e7;
const TAG_FILTER: u64 = 0xf117;
const TAG_SEMI: u64 = 0x5e31;

/// Parameters of the projective-plane search.
///
/// The defaults are a lenient desk-scale setting: existence thresholds whose
/// worst-case constants are far beyond any feasible input are recorded in the
/// certificate audit instead of gating the search. [`SearchConfig::strict`]
/// derives every constant from the worst-case inequalities instead.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Base sampling probability; the four-way partition uses `p, p, 2p, 2p`.
    pub p: f64,
    /// Tolerance for the semi-admissibility checks.
    pub epsilon: f64,
    /// Tolerance for the two apex edges.
    pub epsilon_prime: f64,
    /// Avoidance budget; disks need `k + 2` disjoint paths.
    pub k: usize,
    /// Required number of semi-admissibility witnesses.
    pub r: usize,
    /// Degree threshold of the apex recursion.
    pub d: f64,
    /// Density coefficient; `c · n^{5/2}` edges guarantee success in the worst case.
    pub c: f64,
    pub retry_budget: usize,
    pub mc_samples: usize,
    pub exact_limit: usize,
    pub seed: u64,
    pub strict: bool,
    /// Pair tests spent on optional semi-admissibility peeling; 0 skips it.
    pub filter_budget: usize,
}

/// Path count demanded of the apex edges.
const APEX_PATHS: usize = 2;

impl Default for SearchConfig {
    fn default() -> Self {
        let p = 1.0 / 6.0;
        let epsilon_prime = 1.0 / 3.0;
        let d = SearchConfig::apex_degree(p, epsilon_prime);
        let (k, r, epsilon) = (5, 8, 0.05);
        SearchConfig {
            p,
            epsilon,
            epsilon_prime,
            k,
            r,
            d,
            c: SearchConfig::density_coefficient(p, epsilon, r, k + 2, d),
            retry_budget: 200,
            mc_samples: 2_000,
            exact_limit: 12,
            seed: 0,
            strict: false,
            filter_budget: 0,
        }
    }
}

impl SearchConfig {
    /// `4 (1 + 2α)` with `α = 2·2 / (p² ε')`.
    pub fn apex_degree(p: f64, epsilon_prime: f64) -> f64 {
        let alpha = 2.0 * APEX_PATHS as f64 / (p * p * epsilon_prime);
        4.0 * (1.0 + 2.0 * alpha)
    }

    /// `max(12 r / p · sqrt(k / ε), sqrt(d / 12))`.
    pub fn density_coefficient(p: f64, epsilon: f64, r: usize, k: usize, d: f64) -> f64 {
        (12.0 * r as f64 / p * (k as f64 / epsilon).sqrt()).max((d / 12.0).sqrt())
    }

    /// Smallest `r` with `2 (2/3)^(r-5) < 1 / (6d)`.
    pub fn witness_count(d: f64) -> usize {
        let target = 1.0 / (6.0 * d);
        (5..).find(|&r| 2.0 * (2.0f64 / 3.0).powi(r as i32 - 5) < target).expect("geometric decay")
    }

    /// A tolerance just inside `4 r ε < 1 / (6d)`.
    pub fn witness_tolerance(r: usize, d: f64) -> f64 {
        0.99 / (24.0 * r as f64 * d)
    }

    /// Every constant derived from the worst-case inequalities, with gating switched on.
    pub fn strict() -> Self {
        let base = SearchConfig::default();
        let d = SearchConfig::apex_degree(base.p, base.epsilon_prime);
        let r = SearchConfig::witness_count(d);
        let epsilon = SearchConfig::witness_tolerance(r, d);
        SearchConfig {
            epsilon,
            r,
            d,
            c: SearchConfig::density_coefficient(base.p, epsilon, r, base.k + 2, d),
            strict: true,
            ..base
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let bad = |m: &str| Err(BuildError::Config(m.to_string()));
        if !(self.p > 0.0 && self.p <= 1.0 / 6.0) {
            return bad("p must lie in (0, 1/6] so that p + p + 2p + 2p <= 1");
        }
        for (name, v) in [("epsilon", self.epsilon), ("epsilon_prime", self.epsilon_prime)] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(&format!("{name} must lie in (0, 1]"));
            }
        }
        if self.k == 0 || self.r == 0 || self.mc_samples == 0 {
            return bad("k, r and mc_samples must be at least 1");
        }
        if self.d.is_nan() || self.d <= 0.0 {
            return bad("d must be positive");
        }
        if self.strict && self.d < SearchConfig::apex_degree(self.p, self.epsilon_prime) {
            return bad("strict mode needs d >= 4 (1 + 2 * 4 / (p^2 epsilon_prime))");
        }
        Ok(())
    }

    fn apex_params(&self) -> AdmissibilityParams {
        AdmissibilityParams {
            p: self.p,
            epsilon: self.epsilon_prime,
            k: APEX_PATHS,
            r: 1,
            mc_samples: self.mc_samples,
            exact_limit: self.exact_limit,
        }
    }

    fn semi_params(&self) -> AdmissibilityParams {
        AdmissibilityParams {
            p: self.p,
            epsilon: self.epsilon,
            k: self.k + 2,
            r: self.r,
            mc_samples: self.mc_samples,
            exact_limit: self.exact_limit,
        }
    }
}

/// How often each stage failed across the attempts that were counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCounters {
    pub attempts: u64,
    pub v2_tried: u64,
    pub cycle_c_failures: u64,
    pub cycle_c2_failures: u64,
    pub semi_admissibility_failures: u64,
    pub disk_d_failures: u64,
    pub disk_d2_failures: u64,
}

impl std::ops::AddAssign for StageCounters {
    fn add_assign(&mut self, o: Self) {
        self.attempts += o.attempts;
        self.v2_tried += o.v2_tried;
        self.cycle_c_failures += o.cycle_c_failures;
        self.cycle_c2_failures += o.cycle_c2_failures;
        self.semi_admissibility_failures += o.semi_admissibility_failures;
        self.disk_d_failures += o.disk_d_failures;
        self.disk_d2_failures += o.disk_d2_failures;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Sphere,
    DensePair,
    Apex,
    SemiAdmissibility,
    RetryBudget,
}

/// A search that ended without a certificate, with the reason and diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Error)]
#[error("not found ({stage:?}): {detail}")]
pub struct NotFound {
    pub stage: Stage,
    pub detail: String,
    pub counters: StageCounters,
}

impl NotFound {
    fn at(stage: Stage, detail: impl Into<String>) -> Self {
        NotFound {
            stage,
            detail: detail.into(),
            counters: StageCounters::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error(transparent)]
    NotFound(NotFound),
    #[error(transparent)]
    Build(#[from] BuildError),
}

impl From<NotFound> for SearchError {
    fn from(n: NotFound) -> Self {
        SearchError::NotFound(n)
    }
}

/// The double pyramid over `cycle` with apexes `u` and `u2`.
pub fn build_double_pyramid(u: Vertex, u2: Vertex, cycle: &Cycle) -> Result<Complex2, BuildError> {
    if u == u2 {
        return precondition("apexes must differ");
    }
    if cycle.contains(u) || cycle.contains(u2) {
        return precondition("apex lies on the cycle");
    }
    Ok(cycle
        .edges()
        .into_iter()
        .flat_map(|e| [Triple::cone(u, e), Triple::cone(u2, e)])
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereCertificate {
    pub u: Vertex,
    pub u1: Vertex,
    pub cycle: Cycle,
    pub facets: Complex2,
    pub report: SurfaceReport,
}

/// Finds a double pyramid: pairs are tried by decreasing common-link size
/// (seeded order among ties), at most `budget` of them.
pub fn find_sphere(h: &Hypergraph3, budget: usize, seed: u64) -> Result<SphereCertificate, SearchError> {
    let n = h.n();
    let sizes = h.pair_link_sizes();
    let mut pairs: Vec<(u32, Pair)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let s = sizes[a * n + b];
            if s >= 3 {
                pairs.push((s, (a as Vertex, b as Vertex)));
            }
        }
    }
    pairs.shuffle(&mut stream_rng(seed, 0));
    pairs.sort_by_key(|x| std::cmp::Reverse(x.0));
    for &(_, (u, u2)) in pairs.iter().take(budget) {
        let link = h.pair_link(u, u2).map_err(BuildError::from)?;
        if let Some(cycle) = find_cycle(&link) {
            let facets = build_double_pyramid(u, u2, &cycle)?;
            let report = classify(&facets);
            if report.verdict != Verdict::Sphere {
                return Err(BuildError::Defect(format!("double pyramid classified as {}", report.verdict)).into());
            }
            return Ok(SphereCertificate { u, u1: u2, cycle, facets, report });
        }
    }
    Err(NotFound::at(Stage::Sphere, "no pair link with a cycle within budget").into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensePair {
    pub u: Vertex,
    pub u2: Vertex,
    pub graph: Graph,
    pub threshold: f64,
    pub meets_threshold: bool,
}

/// The pair whose common link inside `edges` is largest.
///
/// Strict mode demands at least `d n / 4` link edges; lenient mode accepts any nonempty link.
pub fn find_dense_pair(
    h: &Hypergraph3,
    edges: Option<&[Triple]>,
    d: f64,
    strict: bool,
) -> Result<DensePair, SearchError> {
    let sub = match edges {
        Some(f) => {
            if let Some(t) = f.iter().find(|t| !h.contains(t)) {
                return Err(BuildError::Precondition(format!("{t:?} is not a hyperedge")).into());
            }
            h.restrict(f)
        }
        None => h.clone(),
    };
    let n = h.n();
    let threshold = d * n as f64 / 4.0;
    if n < 2 {
        return Err(NotFound::at(Stage::DensePair, "fewer than two vertices").into());
    }
    let (u, u2, count) = sub.best_pair().map_err(BuildError::from)?;
    let meets = count as f64 >= threshold;
    if (strict && !meets) || count == 0 {
        return Err(NotFound::at(
            Stage::DensePair,
            format!("best common link has {count} edges, need {threshold}"),
        )
        .into());
    }
    Ok(DensePair {
        u,
        u2,
        graph: sub.pair_link(u, u2).map_err(BuildError::from)?,
        threshold,
        meets_threshold: meets,
    })
}

/// The apex `v0` with its two chosen edges and the subgraph they live in.
#[derive(Clone, Debug, PartialEq)]
pub struct ApexChoice {
    pub subgraph: Graph,
    pub v0: Vertex,
    pub v1: Vertex,
    pub v3: Vertex,
    /// Both edges have an admissible verdict.
    pub certified: bool,
    /// Estimated success probabilities of `v0v1` and `v0v3`.
    pub probabilities: [f64; 2],
}

/// Keeps `target` edges, dropping those whose endpoints have the lowest degrees first.
fn trim_edges(g: &Graph, target: usize) -> Graph {
    let mut edges = g.edges();
    if edges.len() <= target {
        return g.clone();
    }
    let key = |&(a, b): &Pair| {
        let (da, db) = (g.degree(a), g.degree(b));
        (da.min(db), da.max(db), a, b)
    };
    edges.sort_by_key(key);
    let drop = edges.len() - target;
    g.without_edges(&edges[..drop])
}

struct EdgeTable {
    edges: Vec<(Pair, f64, AdmissibilityVerdict)>,
}

impl EdgeTable {
    fn build(g: &Graph, params: &AdmissibilityParams, seed: u64) -> Result<Self, BuildError> {
        let edges = g.edges();
        let rows = edges
            .par_iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let est = estimate_admissibility(g, a, b, params, derive_seed(seed, TAG_APEX, i as u64))?;
                Ok(((a, b), est.p_hat, est.verdict))
            })
            .collect::<Result<Vec<_>, BuildError>>()?;
        Ok(EdgeTable { edges: rows })
    }

    fn get(&self, a: Vertex, b: Vertex) -> (f64, AdmissibilityVerdict) {
        let key = pair(a, b);
        let i = self.edges.binary_search_by(|r| r.0.cmp(&key)).expect("edge in table");
        (self.edges[i].1, self.edges[i].2)
    }
}

/// Ranks the edges at `v0`: admissible ones first, then by probability, then by neighbor.
fn ranked_edges(g: &Graph, table: &EdgeTable, v0: Vertex) -> Vec<(Vertex, f64, bool)> {
    let mut r: Vec<(Vertex, f64, bool)> = g
        .neighbors(v0)
        .iter()
        .map(|&w| {
            let (p, v) = table.get(v0, w);
            (w, p, v == AdmissibilityVerdict::Admissible)
        })
        .collect();
    r.sort_by(|x, y| y.2.cmp(&x.2).then(y.1.total_cmp(&x.1)).then(x.0.cmp(&y.0)));
    r
}

/// First vertex of `scope` with two admissible edges and a third neighbor.
fn certified_apex(g: &Graph, scope: &[Vertex], params: &AdmissibilityParams, seed: u64) -> Result<Option<ApexChoice>, BuildError> {
    let table = EdgeTable::build(g, params, seed)?;
    for &v0 in scope {
        if g.degree(v0) < 3 {
            continue;
        }
        let ranked = ranked_edges(g, &table, v0);
        if ranked[1].2 {
            return Ok(Some(ApexChoice {
                subgraph: g.clone(),
                v0,
                v1: ranked[0].0,
                v3: ranked[1].0,
                certified: true,
                probabilities: [ranked[0].1, ranked[1].1],
            }));
        }
    }
    Ok(None)
}

/// Vertex of `scope` whose two best edges are most likely to carry paths.
fn best_effort_apex(g: &Graph, scope: &[Vertex], params: &AdmissibilityParams, seed: u64) -> Result<Option<ApexChoice>, BuildError> {
    let table = EdgeTable::build(g, params, seed)?;
    let mut best: Option<(usize, f64, ApexChoice)> = None;
    for &v0 in scope {
        if g.degree(v0) < 3 {
            continue;
        }
        let ranked = ranked_edges(g, &table, v0);
        let (first, second) = (ranked[0], ranked[1]);
        if second.1 <= 0.0 {
            continue;
        }
        let admissible = usize::from(first.2) + usize::from(second.2);
        let score = first.1 + second.1;
        if best.as_ref().is_none_or(|(a, s, _)| (admissible, score) > (*a, *s)) {
            best = Some((
                admissible,
                score,
                ApexChoice {
                    subgraph: g.clone(),
                    v0,
                    v1: first.0,
                    v3: second.0,
                    certified: admissible == 2,
                    probabilities: [first.1, second.1],
                },
            ));
        }
    }
    Ok(best.map(|b| b.2))
}

fn apex_recursion(g: &Graph, d: f64, params: &AdmissibilityParams, seed: u64) -> Result<Option<ApexChoice>, BuildError> {
    let n = g.vertex_count();
    if n as f64 <= d {
        let all: Vec<Vertex> = g.vertices().collect();
        return certified_apex(g, &all, params, seed);
    }
    let target = (d * n as f64 / 4.0).ceil() as usize;
    let g = trim_edges(g, target);
    let low: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) as f64 <= d).collect();
    let high: VertexSet = g.vertices().filter(|&v| g.degree(v) as f64 > d).collect();
    let dense = g.induced(&high);
    if dense.edge_count() as f64 > d / 4.0 * high.len() as f64 {
        return apex_recursion(&dense, d, params, seed);
    }
    certified_apex(&g, &low, params, seed)
}

/// Picks `v0` with two incident admissible edges and bounded degree, following
/// the degree-splitting recursion. Lenient mode falls back to the best
/// uncertified candidate of degree at most `d`.
pub fn find_apex(g: &Graph, config: &SearchConfig) -> Result<ApexChoice, SearchError> {
    config.validate()?;
    let params = config.apex_params();
    let seed = derive_seed(config.seed, TAG_APEX, 0);
    if let Some(found) = apex_recursion(g, config.d, &params, seed)? {
        return Ok(found);
    }
    if !config.strict {
        let scope: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) as f64 <= config.d).collect();
        if let Some(found) = best_effort_apex(g, &scope, &params, seed)? {
            return Ok(found);
        }
    }
    Err(NotFound::at(Stage::Apex, "no vertex with two usable incident edges").into())
}

struct Setup<'a> {
    h: &'a Hypergraph3,
    config: &'a SearchConfig,
    u: Vertex,
    u2: Vertex,
    apex: ApexChoice,
    w: VertexSet,
    /// Strict mode: witnesses allowed as disk middles for `D` and, per `v2`, for `D'`.
    witnesses_d: Option<Vec<Vertex>>,
    witnesses_d2: Option<Vec<(Vertex, Vec<Vertex>)>>,
}

struct Found {
    parts: (Cycle, Cycle, DiskPatch, DiskPatch, Vertex),
    partition: [VertexSet; 4],
    facets: Complex2,
    seed: u64,
}

fn semi_check(h: &Hypergraph3, apex: Vertex, z: Vertex, x: Vertex, x2: Vertex, config: &SearchConfig) -> Result<SemiAdmissibility, BuildError> {
    let e = Triple::new(apex, z, x)?;
    let f = Triple::new(apex, z, x2)?;
    let seed = derive_seed(config.seed, TAG_SEMI, u64::from(x) << 32 | u64::from(x2));
    Ok(semi_admissible(h, &e, &f, &config.semi_params(), seed)?)
}

fn sample_partition(n: usize, p: f64, rng: &mut impl Rng) -> [VertexSet; 4] {
    let mut parts: [VertexSet; 4] = Default::default();
    for v in 0..n as Vertex {
        let t: f64 = rng.random();
        let slot = if t < p {
            0
        } else if t < 2.0 * p {
            1
        } else if t < 4.0 * p {
            2
        } else if t < 6.0 * p {
            3
        } else {
            continue;
        };
        parts[slot].insert(v);
    }
    parts
}

fn attempt(s: &Setup<'_>, index: usize) -> Result<(Option<Found>, StageCounters), BuildError> {
    let mut counters = StageCounters {
        attempts: 1,
        ..Default::default()
    };
    let seed = derive_seed(s.config.seed, TAG_ATTEMPT, index as u64);
    let mut rng = stream_rng(seed, 0);
    let partition = sample_partition(s.h.n(), s.config.p, &mut rng);
    let pools: Vec<VertexSet> = partition.iter().map(|u| u.difference(&s.w)).collect();
    let ApexChoice { ref subgraph, v0, v1, v3, .. } = s.apex;

    let mut v2_order: Vec<Vertex> = subgraph.neighbors(v0).iter().copied().filter(|&v| v != v1 && v != v3).collect();
    v2_order.shuffle(&mut rng);

    let Some(c2) = cycle_with_edge(subgraph, v0, v3, &pools[1], &s.w)? else {
        counters.cycle_c2_failures += 1;
        return Ok((None, counters));
    };
    let all_middles = s.h.common_neighbors(s.u, v0);
    let req = DiskRequest { x: v1, y: s.u, z: v0, x2: v3, pool: &pools[2], avoid: &s.w };
    let middles = s.witnesses_d.as_deref().unwrap_or(&all_middles);
    let Some(d) = build_disk_with_candidates(s.h, &req, middles, derive_seed(seed, 1, 0))? else {
        counters.disk_d_failures += 1;
        return Ok((None, counters));
    };
    let all_middles2 = s.h.common_neighbors(s.u2, v0);
    for v2 in v2_order {
        counters.v2_tried += 1;
        let middles2: &[Vertex] = match &s.witnesses_d2 {
            Some(table) => match table.iter().find(|(v, _)| *v == v2) {
                Some((_, wit)) => wit,
                None => {
                    counters.semi_admissibility_failures += 1;
                    continue;
                }
            },
            None => &all_middles2,
        };
        let Some(c) = cycle_with_forced_second_vertex(subgraph, v0, v1, v2, &pools[0], &s.w)? else {
            counters.cycle_c_failures += 1;
            continue;
        };
        let req2 = DiskRequest { x: v2, y: s.u2, z: v0, x2: v3, pool: &pools[3], avoid: &s.w };
        let Some(d2) = build_disk_with_candidates(s.h, &req2, middles2, derive_seed(seed, 2, u64::from(v2)))? else {
            counters.disk_d2_failures += 1;
            continue;
        };
        let facets = assemble_rp2(&Rp2Parts { u: s.u, u2: s.u2, c: &c, c2: &c2, d: &d, d2: &d2, v0, v1, v2, v3 })
            .map_err(|e| match e {
                BuildError::Precondition(m) => BuildError::Defect(format!("search produced invalid parts: {m}")),
                other => other,
            })?;
        return Ok((
            Some(Found {
                parts: (c, c2, d, d2, v2),
                partition,
                facets,
                seed,
            }),
            counters,
        ));
    }
    Ok((None, counters))
}

/// Randomized search for a projective plane inside `h`.
///
/// A dense common link and an apex are fixed once; each attempt then samples
/// a fresh four-way vertex partition, finds the two cycles and two disks in
/// their own parts, and glues them. Attempts run in parallel batches and the
/// lowest successful attempt index wins.
pub fn find_rp2(h: &Hypergraph3, config: &SearchConfig) -> Result<Certificate, SearchError> {
    config.validate()?;
    if config.retry_budget == 0 {
        return Err(NotFound::at(Stage::RetryBudget, "retry budget is zero").into());
    }
    let filtered = if config.filter_budget > 0 {
        let params = config.semi_params();
        let out = filter_semi_admissible(h, &params, derive_seed(config.seed, TAG_FILTER, 0), config.filter_budget)
            .map_err(BuildError::from)?;
        Some(out.kept)
    } else {
        None
    };
    let dense = find_dense_pair(h, filtered.as_deref(), config.d, config.strict)?;
    let apex = find_apex(&dense.graph, config)?;
    let (u, u2) = (dense.u, dense.u2);
    let w = VertexSet::from([u, u2, apex.v0, apex.v1, apex.v3]);

    let (witnesses_d, witnesses_d2) = if config.strict {
        let sd = semi_check(h, u, apex.v0, apex.v1, apex.v3, config)?;
        if !sd.holds {
            return Err(NotFound::at(
                Stage::SemiAdmissibility,
                format!("pair for D has {} witnesses, need {}", sd.witnesses.len(), config.r),
            )
            .into());
        }
        let v2s: Vec<Vertex> = apex
            .subgraph
            .neighbors(apex.v0)
            .iter()
            .copied()
            .filter(|&v| v != apex.v1 && v != apex.v3)
            .collect();
        let table = v2s
            .par_iter()
            .map(|&v2| Ok((v2, semi_check(h, u2, apex.v0, v2, apex.v3, config)?)))
            .collect::<Result<Vec<_>, BuildError>>()?;
        let ok: Vec<(Vertex, Vec<Vertex>)> = table
            .into_iter()
            .filter(|(_, s)| s.holds)
            .map(|(v, s)| (v, s.witnesses.as_slice().to_vec()))
            .collect();
        (Some(sd.witnesses.as_slice().to_vec()), Some(ok))
    } else {
        (None, None)
    };

    let setup = Setup { h, config, u, u2, apex, w, witnesses_d, witnesses_d2 };
    let mut counters = StageCounters::default();
    let mut start = 0;
    while start < config.retry_budget {
        let end = (start + BATCH).min(config.retry_budget);
        let results = (start..end)
            .into_par_iter()
            .map(|i| attempt(&setup, i))
            .collect::<Result<Vec<_>, BuildError>>()?;
        for (offset, (found, c)) in results.into_iter().enumerate() {
            counters += c;
            if let Some(found) = found {
                let cert = certificate(&setup, &dense, found, start + offset, counters)?;
                return Ok(cert);
            }
        }
        start = end;
    }
    Err(NotFound {
        stage: Stage::RetryBudget,
        detail: format!("{} attempts without a certificate", config.retry_budget),
        counters,
    }
    .into())
}

fn certificate(s: &Setup<'_>, dense: &DensePair, found: Found, attempt: usize, counters: StageCounters) -> Result<Certificate, BuildError> {
    let Found { parts: (c, c2, d, d2, v2), partition, facets, seed } = found;
    let ApexChoice { v0, v1, v3, certified, probabilities, .. } = s.apex;
    let sd = semi_check(s.h, s.u, v0, v1, v3, s.config)?;
    let sd2 = semi_check(s.h, s.u2, v0, v2, v3, s.config)?;
    let report = classify(&facets);
    let [u1p, u2p, u3p, u4p] = partition;
    Ok(Certificate {
        facets,
        roles: Roles { u: s.u, u1: s.u2, v0, v1, v2, v3 },
        cycles: Cycles { c, cprime: c2 },
        disks: Disks { d, dprime: d2 },
        partition: Partition { u1: u1p, u2: u2p, u3: u3p, u4: u4p },
        config: s.config.clone(),
        seed,
        report,
        audit: Audit {
            strict: s.config.strict,
            attempt,
            counters,
            pair_link_edges: dense.graph.edge_count(),
            density_threshold: dense.threshold,
            meets_density: dense.meets_threshold,
            apex_certified: certified,
            apex_probabilities: probabilities,
            apex_degree: s.apex.subgraph.degree(v0),
            semi_d: SemiAudit::from(&sd),
            semi_dprime: SemiAudit::from(&sd2),
        },
    })
}
