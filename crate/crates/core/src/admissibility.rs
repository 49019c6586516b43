//! Admissibility of graph edges and semi-admissibility of hyperedge pairs.
//!
//! An edge `xy` is admissible when a random vertex subset, keeping each
//! vertex with probability `p`, contains `k` internally disjoint `x–y` paths
//! with probability at least `1 - epsilon`. Small instances are decided by
//! exact enumeration, larger ones by seeded Monte-Carlo sampling.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{pair, Graph, Hypergraph3, HypergraphError, Pair, Triple, Vertex, VertexSet};
use crate::paths::{FlowNet, SplitNetwork};
use crate::rng::{derive_seed, stream_rng};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdmissibilityError {
    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(Vertex, Vertex),
    #[error("{found} candidate vertices exceed the exact-mode limit of {limit}; use Monte-Carlo mode")]
    TooManyCandidates { found: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("hyperedges {0:?} and {1:?} do not share exactly two vertices")]
    NotNeighbors(Triple, Triple),
    #[error("hyperedge {0:?} is not in the hypergraph")]
    MissingHyperedge(Triple),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityParams {
    pub p: f64,
    pub epsilon: f64,
    pub k: usize,
    pub r: usize,
    pub mc_samples: usize,
    pub exact_limit: usize,
}

impl Default for AdmissibilityParams {
    fn default() -> Self {
        AdmissibilityParams {
            p: 0.5,
            epsilon: 0.1,
            k: 1,
            r: 1,
            mc_samples: 10_000,
            exact_limit: 16,
        }
    }
}

impl AdmissibilityParams {
    pub fn new(p: f64, epsilon: f64, k: usize, r: usize) -> Result<Self, AdmissibilityError> {
        let params = AdmissibilityParams {
            p,
            epsilon,
            k,
            r,
            ..Default::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_mc_samples(mut self, samples: usize) -> Self {
        self.mc_samples = samples;
        self
    }

    pub fn with_exact_limit(mut self, limit: usize) -> Self {
        self.exact_limit = limit;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r;
        self
    }

    /// `r = 0` is accepted so a caller can ask for the vacuous case.
    pub fn validate(&self) -> Result<(), AdmissibilityError> {
        let bad = |m: &str| Err(AdmissibilityError::InvalidParams(m.to_string()));
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad("p must lie in (0, 1]");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return bad("epsilon must lie in (0, 1]");
        }
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be at least 1");
        }
        Ok(())
    }

    /// Success probability the definition demands.
    pub fn threshold(&self) -> f64 {
        1.0 - self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibilityVerdict {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityEstimate {
    pub p_hat: f64,
    pub samples: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mode: EstimateMode,
    pub verdict: AdmissibilityVerdict,
}

impl AdmissibilityEstimate {
    fn exact(prob: f64, subsets: usize, threshold: f64) -> Self {
        AdmissibilityEstimate {
            p_hat: prob,
            samples: subsets,
            ci_low: prob,
            ci_high: prob,
            mode: EstimateMode::Exact,
            verdict: if prob >= threshold {
                AdmissibilityVerdict::Admissible
            } else {
                AdmissibilityVerdict::NotAdmissible
            },
        }
    }
}

/// Wilson score interval for `successes` out of `n` trials.
pub fn wilson_interval(successes: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let low = (center - half).clamp(0.0, 1.0).min(phat);
    let high = (center + half).clamp(0.0, 1.0).max(phat);
    (low, high)
}

/// Vertices lying on some simple `x–y` path of length at least two.
///
/// `v` qualifies iff two internally disjoint paths join `v` to `{x, y}`,
/// one ending at each, which is a flow of value two in the vertex-split graph.
pub fn relevant_candidates(g: &Graph, x: Vertex, y: Vertex) -> Vec<Vertex> {
    let n = g.universe();
    // Node 2v is v_in, 2v+1 is v_out, 2n is the sink.
    let mut base = FlowNet::with_nodes(2 * n + 1);
    let sink = 2 * n;
    let mut vertex_arc = vec![usize::MAX; n];
    for v in g.vertices() {
        let vi = v as usize;
        if v == x || v == y {
            base.add_arc(2 * vi, sink, 1);
            continue;
        }
        vertex_arc[vi] = base.add_arc(2 * vi, 2 * vi + 1, 1);
        for &w in g.neighbors(v) {
            base.add_arc(2 * vi + 1, 2 * w as usize, 1);
        }
    }
    g.vertices()
        .filter(|&v| v != x && v != y)
        .filter(|&v| {
            let vi = v as usize;
            let mut net = base.clone();
            net.set_base(vertex_arc[vi], 0);
            net.max_flow(2 * vi + 1, sink, 2) == 2
        })
        .collect()
}

/// Reusable decision structure for the event "k disjoint paths survive" on a fixed edge.
#[derive(Clone, Debug)]
pub struct EdgeEvent {
    net: SplitNetwork,
    k: usize,
}

impl EdgeEvent {
    pub fn new(g: &Graph, x: Vertex, y: Vertex, k: usize) -> Result<Self, AdmissibilityError> {
        if x == y || !g.has_edge(x, y) {
            return Err(AdmissibilityError::NotAnEdge(x, y));
        }
        let candidates = relevant_candidates(g, x, y);
        Ok(EdgeEvent {
            net: SplitNetwork::new(g, x, y, candidates),
            k,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.net.candidates().len()
    }

    pub fn candidates(&self) -> &[Vertex] {
        self.net.candidates()
    }

    /// Whether the candidates flagged in `mask` carry `k` disjoint paths.
    pub fn holds(&mut self, mask: impl Fn(usize) -> bool) -> bool {
        self.k == 0 || self.net.count(mask, self.k) >= self.k
    }

    fn check_limit(&self, limit: usize) -> Result<usize, AdmissibilityError> {
        let l = self.candidate_count();
        if l > limit || l >= usize::BITS as usize - 1 {
            return Err(AdmissibilityError::TooManyCandidates { found: l, limit });
        }
        Ok(l)
    }

    /// Exact probability by enumerating every candidate subset.
    pub fn exact_probability(&mut self, p: f64, limit: usize) -> Result<f64, AdmissibilityError> {
        let l = self.check_limit(limit)?;
        let weights = subset_weights(p, l);
        let mut total = 0.0;
        for mask in 0..(1usize << l) {
            if self.holds(|i| mask >> i & 1 == 1) {
                total += weights[mask.count_ones() as usize];
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// Exact decision of `Pr >= threshold`, stopping as soon as either side is settled.
    pub fn exact_decides(&mut self, p: f64, threshold: f64, limit: usize) -> Result<bool, AdmissibilityError> {
        let l = self.check_limit(limit)?;
        let weights = subset_weights(p, l);
        let (mut hit, mut miss) = (0.0, 0.0);
        let slack = 1e-12;
        for mask in 0..(1usize << l) {
            let w = weights[mask.count_ones() as usize];
            if self.holds(|i| mask >> i & 1 == 1) {
                hit += w;
                if hit >= threshold - slack {
                    return Ok(true);
                }
            } else {
                miss += w;
                if miss > 1.0 - threshold + slack {
                    return Ok(false);
                }
            }
        }
        Ok(hit >= threshold - slack)
    }

    /// Number of successes among `samples` seeded trials.
    pub fn sample(&self, p: f64, samples: usize, seed: u64) -> usize {
        let l = self.candidate_count();
        if self.k == 0 {
            return samples;
        }
        const CHUNK: usize = 256;
        let chunks = samples.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map_init(
                || (self.clone(), vec![false; l]),
                |(event, mask), c| {
                    let mut hits = 0;
                    for trial in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                        let mut rng = stream_rng(seed, trial as u64);
                        for slot in mask.iter_mut() {
                            *slot = rng.random::<f64>() < p;
                        }
                        if event.holds(|i| mask[i]) {
                            hits += 1;
                        }
                    }
                    hits
                },
            )
            .sum()
    }
}

/// `weights[s] = p^s (1-p)^(l-s)`.
fn subset_weights(p: f64, l: usize) -> Vec<f64> {
    (0..=l)
        .map(|s| p.powi(s as i32) * (1.0 - p).powi((l - s) as i32))
        .collect()
}

/// Exact `Pr[k disjoint x–y paths survive]` under independent vertex sampling.
pub fn admissible_exact(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    p: f64,
    k: usize,
    exact_limit: usize,
) -> Result<f64, AdmissibilityError> {
    EdgeEvent::new(g, x, y, k)?.exact_probability(p, exact_limit)
}

/// Monte-Carlo estimate with a Wilson interval and three-way verdict.
pub fn admissible_mc(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<AdmissibilityEstimate, AdmissibilityError> {
    params.validate()?;
    let event = EdgeEvent::new(g, x, y, params.k)?;
    Ok(mc_estimate(&event, params, seed))
}

fn mc_estimate(event: &EdgeEvent, params: &AdmissibilityParams, seed: u64) -> AdmissibilityEstimate {
    let n = params.mc_samples;
    let hits = event.sample(params.p, n, seed);
    // At p = 1 every draw is the full candidate set, so the outcome carries no sampling error.
    let (ci_low, ci_high) = if params.p >= 1.0 {
        let v = hits as f64 / n as f64;
        (v, v)
    } else {
        wilson_interval(hits, n)
    };
    let verdict = if ci_low >= params.threshold() {
        AdmissibilityVerdict::Admissible
    } else if ci_high < params.threshold() {
        AdmissibilityVerdict::NotAdmissible
    } else {
        AdmissibilityVerdict::Inconclusive
    };
    AdmissibilityEstimate {
        p_hat: hits as f64 / n as f64,
        samples: n,
        ci_low,
        ci_high,
        mode: EstimateMode::MonteCarlo,
        verdict,
    }
}

/// Exact when the relevant candidate set fits `exact_limit`, Monte-Carlo otherwise.
pub fn estimate_admissibility(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<AdmissibilityEstimate, AdmissibilityError> {
    params.validate()?;
    let mut event = EdgeEvent::new(g, x, y, params.k)?;
    estimate_event(&mut event, params, seed)
}

fn estimate_event(
    event: &mut EdgeEvent,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<AdmissibilityEstimate, AdmissibilityError> {
    let l = event.candidate_count();
    if l <= params.exact_limit {
        let prob = event.exact_probability(params.p, params.exact_limit)?;
        Ok(AdmissibilityEstimate::exact(prob, 1 << l, params.threshold()))
    } else {
        Ok(mc_estimate(event, params, seed))
    }
}

/// AdmissibilityVerdict only, with early exit in exact mode.
pub fn decide_admissible(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    let mut event = EdgeEvent::new(g, x, y, params.k)?;
    if event.candidate_count() <= params.exact_limit {
        let ok = event.exact_decides(params.p, params.threshold(), params.exact_limit)?;
        Ok(if ok { AdmissibilityVerdict::Admissible } else { AdmissibilityVerdict::NotAdmissible })
    } else {
        Ok(mc_estimate(&event, params, seed).verdict)
    }
}

/// Outcome of a semi-admissibility check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiAdmissibility {
    pub holds: bool,
    pub witnesses: VertexSet,
    pub candidates: usize,
    pub inconclusive: usize,
}

/// Splits two neighboring hyperedges into `(x, y, z, x')` with shared pair `yz`.
pub fn shared_pair(e: &Triple, f: &Triple) -> Result<(Vertex, Pair, Vertex), AdmissibilityError> {
    let shared: Vec<Vertex> = e.vertices().into_iter().filter(|&v| f.contains(v)).collect();
    if shared.len() != 2 {
        return Err(AdmissibilityError::NotNeighbors(*e, *f));
    }
    let yz = pair(shared[0], shared[1]);
    let x = e.apex_over(yz).expect("shared pair lies in e");
    let x2 = f.apex_over(yz).expect("shared pair lies in f");
    Ok((x, yz, x2))
}

/// Whether `yz` is admissible in the pair-link of `a` and `b`; inconclusive counts as failure.
fn pair_admissible(
    h: &Hypergraph3,
    a: Vertex,
    b: Vertex,
    yz: Pair,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    let g = h.pair_link(a, b)?;
    if !g.has_edge(yz.0, yz.1) {
        return Ok(AdmissibilityVerdict::NotAdmissible);
    }
    decide_admissible(&g, yz.0, yz.1, params, seed)
}

/// Scans every third hyperedge `x''yz` and collects the witnesses `x''`
/// for which `yz` is admissible in both `H_{x,x''}` and `H_{x'',x'}`.
pub fn semi_admissible(
    h: &Hypergraph3,
    e: &Triple,
    f: &Triple,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<SemiAdmissibility, AdmissibilityError> {
    params.validate()?;
    let (x, yz, x2) = shared_pair(e, f)?;
    for t in [e, f] {
        if !h.contains(t) {
            return Err(AdmissibilityError::MissingHyperedge(*t));
        }
    }
    if params.r == 0 {
        return Ok(SemiAdmissibility {
            holds: true,
            witnesses: VertexSet::new(),
            candidates: 0,
            inconclusive: 0,
        });
    }
    let candidates: Vec<Vertex> = h
        .common_neighbors(yz.0, yz.1)
        .into_iter()
        .filter(|&w| w != x && w != x2)
        .collect();
    let mut witnesses = VertexSet::new();
    let mut inconclusive = 0;
    for &w in &candidates {
        let first = pair_admissible(h, x, w, yz, params, derive_seed(seed, u64::from(w), 0))?;
        let second = if first == AdmissibilityVerdict::Admissible {
            pair_admissible(h, w, x2, yz, params, derive_seed(seed, u64::from(w), 1))?
        } else {
            first
        };
        match second {
            AdmissibilityVerdict::Admissible => {
                witnesses.insert(w);
            }
            AdmissibilityVerdict::Inconclusive => inconclusive += 1,
            AdmissibilityVerdict::NotAdmissible => {}
        }
    }
    Ok(SemiAdmissibility {
        holds: witnesses.len() >= params.r,
        witnesses,
        candidates: candidates.len(),
        inconclusive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeFractionStats {
    pub edges: usize,
    pub admissible: usize,
    pub not_admissible: usize,
    pub inconclusive: usize,
    pub bound: f64,
}

/// AdmissibilityVerdict counts over all edges, next to the bound `(2k / (p² ε)) · |V(G)|` on non-admissible edges.
pub fn admissible_edge_fraction(
    g: &Graph,
    params: &AdmissibilityParams,
    seed: u64,
) -> Result<EdgeFractionStats, AdmissibilityError> {
    params.validate()?;
    let edges = g.edges();
    let verdicts: Vec<AdmissibilityVerdict> = edges
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let mut event = EdgeEvent::new(g, x, y, params.k)?;
            Ok(estimate_event(&mut event, params, derive_seed(seed, 0xed6e, i as u64))?.verdict)
        })
        .collect::<Result<_, AdmissibilityError>>()?;
    let count = |v: AdmissibilityVerdict| verdicts.iter().filter(|&&w| w == v).count();
    Ok(EdgeFractionStats {
        edges: edges.len(),
        admissible: count(AdmissibilityVerdict::Admissible),
        not_admissible: count(AdmissibilityVerdict::NotAdmissible),
        inconclusive: count(AdmissibilityVerdict::Inconclusive),
        bound: 2.0 * params.k as f64 / (params.p * params.p * params.epsilon) * g.vertex_count() as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterOutcome {
    pub kept: Vec<Triple>,
    pub tests: usize,
    pub evictions: usize,
    pub untested_pairs: usize,
    /// Set when the budget ran out before every surviving pair was tested.
    pub budget_exhausted: bool,
}

/// Peels hyperedges until every tested neighboring pair is semi-admissible.
///
/// Neighboring pairs are visited in a seeded order; a failing pair evicts the
/// edge with the smaller total pair codegree (ties evict the larger triple).
pub fn filter_semi_admissible(
    h: &Hypergraph3,
    params: &AdmissibilityParams,
    seed: u64,
    budget: usize,
) -> Result<FilterOutcome, AdmissibilityError> {
    params.validate()?;
    let edges = h.edges();
    let index_of = |t: &Triple| edges.binary_search(t).expect("edge of h");
    let table = h.codegree_table();
    let codeg = |p: Pair| {
        table
            .binary_search_by(|(q, _)| q.cmp(&p))
            .map_or(0, |i| table[i].1.len())
    };
    let score: Vec<usize> = edges.iter().map(|t| t.pairs().iter().map(|&p| codeg(p)).sum()).collect();

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (yz, ext) in &table {
        for (i, &a) in ext.iter().enumerate() {
            for &b in &ext[i + 1..] {
                pairs.push((index_of(&Triple::cone(a, *yz)), index_of(&Triple::cone(b, *yz))));
            }
        }
    }
    pairs.shuffle(&mut stream_rng(seed, 0));

    let mut alive = vec![true; edges.len()];
    let (mut tests, mut evictions) = (0, 0);
    let mut cursor = 0;
    while cursor < pairs.len() && tests < budget {
        let (a, b) = pairs[cursor];
        cursor += 1;
        if !(alive[a] && alive[b]) {
            continue;
        }
        tests += 1;
        let check = semi_admissible(h, &edges[a], &edges[b], params, derive_seed(seed, 0xf1, tests as u64))?;
        if !check.holds {
            let victim = if score[a] < score[b] || (score[a] == score[b] && a > b) { a } else { b };
            alive[victim] = false;
            evictions += 1;
        }
    }
    let untested_pairs = pairs[cursor..].iter().filter(|&&(a, b)| alive[a] && alive[b]).count();
    Ok(FilterOutcome {
        kept: edges.iter().zip(&alive).filter(|(_, &on)| on).map(|(t, _)| *t).collect(),
        tests,
        evictions,
        untested_pairs,
        budget_exhausted: untested_pairs > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::disjoint_paths;

    fn k4_minus() -> Graph {
        Graph::new(4, 0..4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// Oracle: enumerate every subset of all non-endpoint vertices.
    fn brute_probability(g: &Graph, x: Vertex, y: Vertex, p: f64, k: usize) -> f64 {
        let others: Vec<Vertex> = g.vertices().filter(|&v| v != x && v != y).collect();
        let l = others.len();
        (0..1usize << l)
            .map(|mask| {
                let u: VertexSet = (0..l).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
                let s = u.len() as i32;
                let w = p.powi(s) * (1.0 - p).powi(l as i32 - s);
                if disjoint_paths(g, x, y, &u, k).unwrap().is_some() { w } else { 0.0 }
            })
            .sum()
    }

    #[test]
    fn exact_examples() {
        let g = k4_minus();
        assert!((admissible_exact(&g, 0, 1, 0.5, 1, 16).unwrap() - 0.75).abs() < 1e-12);
        assert!((admissible_exact(&g, 0, 1, 0.5, 2, 16).unwrap() - 0.25).abs() < 1e-12);
        assert!((admissible_exact(&g, 0, 1, 1.0, 2, 16).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            admissible_exact(&g, 2, 3, 0.5, 1, 16),
            Err(AdmissibilityError::NotAnEdge(2, 3))
        ));
    }

    #[test]
    fn exact_limit_is_enforced() {
        let k8 = Graph::complete(8, &(0..8).collect::<Vec<_>>());
        assert!(matches!(
            admissible_exact(&k8, 0, 1, 0.5, 1, 4),
            Err(AdmissibilityError::TooManyCandidates { found: 6, limit: 4 })
        ));
    }

    #[test]
    fn irrelevant_vertices_are_pruned() {
        // Pendant 4 on x and an isolated triangle 5-6-7 cannot lie on an x-y path.
        let g = Graph::new(8, 0..8, [(0, 1), (0, 2), (2, 1), (0, 4), (5, 6), (6, 7), (5, 7), (2, 3)]).unwrap();
        assert_eq!(relevant_candidates(&g, 0, 1), vec![2]);
        let p = admissible_exact(&g, 0, 1, 0.3, 1, 16).unwrap();
        assert!((p - brute_probability(&g, 0, 1, 0.3, 1)).abs() < 1e-12);
    }

    #[test]
    fn mc_examples() {
        let g = k4_minus();
        let params = AdmissibilityParams::new(0.5, 0.1, 1, 1).unwrap().with_mc_samples(50_000);
        let est = admissible_mc(&g, 0, 1, &params, 7).unwrap();
        assert!((est.p_hat - 0.75).abs() < 0.02, "{est:?}");
        assert!(est.ci_low <= est.p_hat && est.p_hat <= est.ci_high);

        let sure = AdmissibilityParams::new(1.0, 0.01, 1, 1).unwrap().with_mc_samples(100);
        let est = admissible_mc(&g, 0, 1, &sure, 1).unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.verdict, AdmissibilityVerdict::Admissible);

        let lone = Graph::new(3, 0..3, [(0, 1), (1, 2)]).unwrap();
        let est = admissible_mc(&lone, 0, 1, &sure, 1).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.verdict, AdmissibilityVerdict::NotAdmissible);
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let g = Graph::complete(9, &(0..9).collect::<Vec<_>>());
        let params = AdmissibilityParams::new(0.3, 0.2, 2, 1).unwrap().with_mc_samples(3_000);
        let a = admissible_mc(&g, 0, 1, &params, 42).unwrap();
        let b = admissible_mc(&g, 0, 1, &params, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wilson_interval_brackets_estimate() {
        for (s, n) in [(0, 10), (10, 10), (5, 10), (1, 1000), (999, 1000)] {
            let (lo, hi) = wilson_interval(s, n);
            let phat = s as f64 / n as f64;
            assert!(0.0 <= lo && lo <= phat && phat <= hi && hi <= 1.0);
        }
    }

    #[test]
    fn decide_matches_exact() {
        let g = Graph::complete(7, &(0..7).collect::<Vec<_>>());
        for &(p, eps) in &[(0.5, 0.3), (0.3, 0.5), (0.9, 0.01), (0.2, 0.9)] {
            let params = AdmissibilityParams::new(p, eps, 2, 1).unwrap();
            let exact = admissible_exact(&g, 0, 1, p, 2, 16).unwrap();
            let fast = decide_admissible(&g, 0, 1, &params, 0).unwrap();
            assert_eq!(fast == AdmissibilityVerdict::Admissible, exact >= 1.0 - eps, "p={p} eps={eps}");
        }
    }

    #[test]
    fn edge_fraction_examples() {
        let k12 = Graph::complete(12, &(0..12).collect::<Vec<_>>());
        let params = AdmissibilityParams::new(0.5, 0.3, 2, 1).unwrap();
        let stats = admissible_edge_fraction(&k12, &params, 3).unwrap();
        assert_eq!((stats.edges, stats.admissible), (66, 66));

        let empty = Graph::new(4, 0..4, []).unwrap();
        let stats = admissible_edge_fraction(&empty, &params, 3).unwrap();
        assert_eq!(stats.edges, 0);
        assert_eq!(stats.bound, 2.0 * 2.0 / (0.25 * 0.3) * 4.0);

        let star = Graph::new(6, 0..6, (1..6).map(|v| (0, v))).unwrap();
        let stats = admissible_edge_fraction(&star, &params, 3).unwrap();
        assert_eq!((stats.edges, stats.not_admissible), (5, 5));
        assert_eq!(
            serde_json::to_string(&stats).unwrap(),
            format!(
                "{{\"edges\":5,\"admissible\":0,\"not_admissible\":5,\"inconclusive\":0,\"bound\":{}}}",
                serde_json::to_string(&stats.bound).unwrap()
            )
        );
    }

    #[test]
    fn semi_admissible_trivial_cases() {
        let h = Hypergraph3::from_triples(5, &[[0, 1, 2], [1, 2, 3]]).unwrap();
        let e = Triple::new(0, 1, 2).unwrap();
        let f = Triple::new(1, 2, 3).unwrap();
        let params = AdmissibilityParams::new(0.5, 0.5, 1, 1).unwrap();
        let out = semi_admissible(&h, &e, &f, &params, 0).unwrap();
        assert!(!out.holds && out.witnesses.is_empty());

        let out = semi_admissible(&h, &e, &f, &params.with_r(0), 0).unwrap();
        assert!(out.holds && out.witnesses.is_empty());

        let g = Triple::new(0, 3, 4).unwrap();
        assert!(matches!(
            semi_admissible(&h, &e, &g, &params, 0),
            Err(AdmissibilityError::NotNeighbors(..))
        ));
    }

    #[test]
    fn semi_admissible_on_complete_hypergraph() {
        let h = Hypergraph3::complete(8);
        let e = Triple::new(0, 1, 2).unwrap();
        let f = Triple::new(1, 2, 3).unwrap();
        let params = AdmissibilityParams::new(1.0, 0.1, 1, 3).unwrap();
        let out = semi_admissible(&h, &e, &f, &params, 0).unwrap();
        assert!(out.holds);
        assert_eq!(out.witnesses, VertexSet::from([4, 5, 6, 7]));
        // Each witness is re-checked with direct path searches.
        for w in out.witnesses.iter() {
            for (a, b) in [(0, w), (w, 3)] {
                let g = h.pair_link(a, b).unwrap();
                let u: VertexSet = g.vertices().filter(|&v| v != 1 && v != 2).collect();
                assert!(disjoint_paths(&g, 1, 2, &u, 1).unwrap().is_some());
            }
        }
    }

    #[test]
    fn filter_examples() {
        let h = Hypergraph3::complete(9);
        let params = AdmissibilityParams::new(0.5, 0.5, 1, 1).unwrap();
        let out = filter_semi_admissible(&h, &params, 1, 200).unwrap();
        assert_eq!(out.evictions, 0);
        assert_eq!(out.kept.len(), h.edge_count());

        let out = filter_semi_admissible(&h, &params, 1, 0).unwrap();
        assert_eq!(out.kept.len(), h.edge_count());
        assert_eq!(out.tests, 0);
        assert!(out.budget_exhausted);

        let sparse = Hypergraph3::from_triples(6, &[[0, 1, 2], [1, 2, 3], [3, 4, 5], [0, 4, 5]]).unwrap();
        let out = filter_semi_admissible(&sparse, &params, 1, 100).unwrap();
        assert!(out.kept.len() < 4);
        assert!(!out.budget_exhausted);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_graph() -> impl Strategy<Value = Graph> {
            (4usize..=8).prop_flat_map(|n| {
                let all: Vec<(Vertex, Vertex)> = (0..n as Vertex)
                    .flat_map(|a| (a + 1..n as Vertex).map(move |b| (a, b)))
                    .collect();
                proptest::sample::subsequence(all.clone(), 0..=all.len()).prop_map(move |mut es| {
                    if !es.contains(&(0, 1)) {
                        es.push((0, 1));
                    }
                    Graph::new(n, 0..n as Vertex, es).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn exact_matches_brute_force(g in small_graph(), k in 1usize..=3, p in 0.05f64..0.95) {
                let fast = admissible_exact(&g, 0, 1, p, k, 16).unwrap();
                let slow = brute_probability(&g, 0, 1, p, k);
                prop_assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
            }

            #[test]
            fn exact_is_monotone(g in small_graph()) {
                let mut prev_k = [1.0f64; 4];
                for k in 1..=3 {
                    let mut prev_p = 0.0;
                    for (i, &p) in [0.1, 0.3, 0.5, 0.9].iter().enumerate() {
                        let pr = admissible_exact(&g, 0, 1, p, k, 16).unwrap();
                        prop_assert!(pr + 1e-12 >= prev_p);
                        prop_assert!(pr <= prev_k[i] + 1e-12);
                        prev_p = pr;
                        prev_k[i] = pr;
                    }
                }
            }
        }
    }
}
