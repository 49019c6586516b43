//! Searching 3-uniform hypergraphs for triangulated projective planes.
//!
//! The crate covers surface recognition for pure 2-complexes, link graphs and
//! vertex-disjoint path systems, random-subset path probabilities, the disk and
//! projective-plane gluing constructions, and a seeded randomized search that
//! emits verifiable certificates.

pub mod admissibility;
pub mod builder;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod paths;
pub mod rng;
pub mod surface;

pub use admissibility::{
    admissible_edge_fraction, admissible_exact, admissible_mc, estimate_admissibility, semi_admissible,
    AdmissibilityError, AdmissibilityEstimate, AdmissibilityParams, AdmissibilityVerdict, EstimateMode,
};
pub use builder::{
    assemble_rp2, build_disk_from_pair, build_double_pyramid, find_rp2, find_sphere, verify_certificate, BuildError,
    Certificate, DiskPatch, DiskRequest, NotFound, Rp2Parts, SearchConfig, SearchError, Stage,
};
pub use generators::{fixture, random_hypergraph, GeneratorError};
pub use hypergraph::{pair, Graph, Hypergraph3, HypergraphError, Pair, Triple, Vertex, VertexSet};
pub use io::{parse_graph, parse_hypergraph, serialize_graph, serialize_hypergraph, ParseError};
pub use paths::{disjoint_paths, Cycle, PathError, PathSystem};
pub use surface::{classify, euler_characteristic, Complex2, SurfaceReport, Verdict};
