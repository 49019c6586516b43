//! Shared inputs for the benchmarks.

use rp2hunt_core::generators::{fixture, planted_make_rp_instance, PlantedRp2, FIXTURE_NAMES};
use rp2hunt_core::hypergraph::{Graph, Hypergraph3};
use rp2hunt_core::surface::Complex2;

/// All named fixtures with their names.
pub fn fixtures() -> Vec<(String, Complex2)> {
    FIXTURE_NAMES
        .iter()
        .map(|&name| (name.to_string(), fixture(name).expect("known fixture").facets))
        .collect()
}

/// Common link of vertices 0 and 1 in the complete hypergraph on `n` vertices.
pub fn complete_pair_link(n: usize) -> Graph {
    Hypergraph3::complete(n).pair_link(0, 1).expect("n >= 2")
}

pub fn planted(len: usize) -> PlantedRp2 {
    planted_make_rp_instance(len, len, len / 2, len / 2, 1).expect("valid sizes")
}
