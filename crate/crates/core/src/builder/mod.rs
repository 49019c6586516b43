//! Constructions that turn paths and disks into surfaces, and the randomized
//! search that drives them.

mod assemble;
mod certificate;
mod disk;
mod pipeline;

use thiserror::Error;

use crate::admissibility::AdmissibilityError;
use crate::hypergraph::HypergraphError;
use crate::paths::PathError;

pub use assemble::{assemble_rp2, check_rp2_hypotheses, Rp2Parts};
pub use certificate::{verify_certificate, Audit, Certificate, CertificateCheck, Cycles, Disks, Partition, Roles, SemiAudit};
pub use disk::{build_disk_from_pair, build_disk_with_candidates, disk_facets, DiskPatch, DiskRequest};
pub use pipeline::{
    build_double_pyramid, find_apex, find_dense_pair, find_rp2, find_sphere, ApexChoice, DensePair, NotFound,
    SearchConfig, SearchError, SphereCertificate, Stage, StageCounters,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal defect: {0}")]
    Defect(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T, BuildError> {
    Err(BuildError::Precondition(msg.into()))
}
