//! Local rules: maps from radius-`r` disks to graphs.
//!
//! A rule names the vertices it creates by extending the names of the
//! vertices of its input disk (`a` may produce `a.0`, `a.1`, ...). Renamings
//! act on bases and keep tags, so every rule following this convention is
//! equivariant with each renaming as its own conjugate.

mod canonical;
mod checks;
mod domain;
mod memo;
mod table;

pub use canonical::{canonical_name, canonicalize, is_canonical, CanonicalDisk};
pub use checks::{
    check_bound, check_consistency, check_disjointness, check_equivariance, check_monotonic,
    check_monotonic_with, observed_bound, MonotonicityVerdict,
};
pub use domain::enumerate_disks;
pub(crate) use memo::Memo;
pub use table::RuleTable;

use std::sync::Arc;

use thiserror::Error;

use crate::disk::{DiskError, PointedGraph};
use crate::graph::{Graph, GraphError, NameMap, Signature, VertexName};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("input is not a disk of radius {radius}: {disk:?}")]
    WrongRadius { radius: usize, disk: PointedGraph },
    #[error("no entry for disk {0:?} and no default")]
    MissingEntry(PointedGraph),
    #[error("disk and rule are over different signatures")]
    SignatureMismatch,
    #[error("pointed graph is not connected")]
    Disconnected,
    #[error("output vertex {0} is not derived from an input vertex")]
    BadOutputName(VertexName),
    #[error("output names collide when mapped back onto the input names")]
    NameCollision,
    #[error("rule table key is not in canonical form: {0:?}")]
    NonCanonicalKey(PointedGraph),
    #[error("conflicting entries for disk {0:?}")]
    DuplicateEntry(PointedGraph),
    #[error("disk enumeration exceeded the cap of {0}")]
    CapExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Disk(#[from] DiskError),
}

/// A local rule of fixed radius over a fixed signature.
pub trait LocalRule: Send + Sync {
    fn radius(&self) -> usize;

    fn signature(&self) -> &Arc<Signature>;

    /// The output of the rule on a radius-`radius()` disk.
    fn eval(&self, disk: &PointedGraph) -> Result<Graph, RuleError>;
}

impl<T: LocalRule + ?Sized> LocalRule for Arc<T> {
    fn radius(&self) -> usize {
        (**self).radius()
    }

    fn signature(&self) -> &Arc<Signature> {
        (**self).signature()
    }

    fn eval(&self, disk: &PointedGraph) -> Result<Graph, RuleError> {
        (**self).eval(disk)
    }
}

/// Evaluate `f` on the canonical form of `disk` and carry the result back
/// onto `disk`'s names. `f` receives the canonical disk.
pub fn eval_via_canonical(
    disk: &PointedGraph,
    f: impl FnOnce(&CanonicalDisk) -> Result<Graph, RuleError>,
) -> Result<Graph, RuleError> {
    let (canon, witness) = canonicalize(disk)?;
    let out = f(&canon)?;
    pull_back(&witness, &out)
}

/// Map an output over canonical names back through the witness.
pub(crate) fn pull_back(witness: &NameMap, out: &Graph) -> Result<Graph, RuleError> {
    if out.is_empty() {
        return Ok(out.clone());
    }
    witness
        .inverse()
        .apply_graph_derived(out)
        .ok_or(RuleError::NameCollision)
}

/// Check the signature and radius preconditions of [`LocalRule::eval`].
pub(crate) fn check_input(
    rule: &(impl LocalRule + ?Sized),
    disk: &PointedGraph,
) -> Result<(), RuleError> {
    let sig = disk.graph.signature();
    if !Arc::ptr_eq(sig, rule.signature()) && **sig != **rule.signature() {
        return Err(RuleError::SignatureMismatch);
    }
    if !crate::disk::is_disk_of_radius(disk, rule.radius()) {
        return Err(RuleError::WrongRadius {
            radius: rule.radius(),
            disk: disk.clone(),
        });
    }
    Ok(())
}
