//! Global evolution generated by a local rule.
//!
//! [`Dynamics::apply_cgd`] is the causal-graph-dynamics semantics: the union
//! of the rule's outputs on the disk around every vertex.
//! [`Dynamics::apply_kan`] is the pointwise left Kan extension along the
//! pointer-dropping map: the union of the outputs on *every* disk contained
//! in the graph. The two agree exactly when the rule is monotonic.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::disk::{
    enumerate_subdisks, DiskError, Neighborhoods, PointedGraph, DEFAULT_SUBDISK_CAP,
};
use crate::exec::Strategy;
use crate::graph::{Conflict, Graph, GraphError, Renaming, Signature, UnionBuilder, VertexName};
use crate::rule::{
    check_input, eval_via_canonical, CanonicalDisk, LocalRule, Memo, RuleError, RuleTable,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("outputs at {first} and {second} are inconsistent: {conflict}")]
    Inconsistent {
        first: VertexName,
        second: VertexName,
        conflict: Conflict,
    },
    #[error(
        "Kan extension undefined: outputs of {first:?} and {second:?} have no union ({conflict})"
    )]
    KanUndefined {
        first: Box<PointedGraph>,
        second: Box<PointedGraph>,
        conflict: Conflict,
    },
    #[error("graph and rule are over different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Disk(#[from] DiskError),
}

/// The global map generated by a local rule.
#[derive(Clone)]
pub struct Dynamics {
    rule: Arc<dyn LocalRule>,
}

impl std::fmt::Debug for Dynamics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dynamics(radius {})", self.rule.radius())
    }
}

impl Dynamics {
    pub fn new(rule: impl LocalRule + 'static) -> Self {
        Dynamics {
            rule: Arc::new(rule),
        }
    }

    pub fn from_arc(rule: Arc<dyn LocalRule>) -> Self {
        Dynamics { rule }
    }

    pub fn rule(&self) -> &Arc<dyn LocalRule> {
        &self.rule
    }

    pub fn radius(&self) -> usize {
        self.rule.radius()
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.rule.signature()
    }

    fn check_signature(&self, g: &Graph) -> Result<(), DynamicsError> {
        if **g.signature() == **self.signature() {
            Ok(())
        } else {
            Err(DynamicsError::SignatureMismatch)
        }
    }

    /// `F(G)`: union of `f` on the disk at every vertex.
    pub fn apply_cgd(&self, g: &Graph) -> Result<Graph, DynamicsError> {
        self.apply_cgd_with(Strategy::default(), g)
    }

    pub fn apply_cgd_with(&self, strategy: Strategy, g: &Graph) -> Result<Graph, DynamicsError> {
        self.check_signature(g)?;
        let r = self.radius();
        let vertices: Vec<&VertexName> = g.vertices().iter().collect();
        let index = Neighborhoods::new(g);
        let outputs = strategy.try_map(&vertices, |v| -> Result<Graph, DynamicsError> {
            Ok(self.rule.eval(&index.extract(v, r)?)?)
        })?;
        let mut acc = UnionBuilder::new(self.signature().clone());
        for (i, out) in outputs.iter().enumerate() {
            if let Some(conflict) = acc.conflict(out).expect("same signature") {
                let j = (0..i)
                    .find(|&j| outputs[j].conflict_with(out).ok().flatten().is_some())
                    .expect("some earlier output conflicts");
                return Err(DynamicsError::Inconsistent {
                    first: vertices[j].clone(),
                    second: vertices[i].clone(),
                    conflict,
                });
            }
            acc.absorb(out);
        }
        Ok(acc.finish())
    }

    /// The pointwise left Kan extension at `G`: union of `f(D)` over every
    /// disk `D` with `D ⊆ G`. Fails with [`DynamicsError::KanUndefined`]
    /// when the outputs have no common upper bound.
    pub fn apply_kan(&self, g: &Graph) -> Result<Graph, DynamicsError> {
        self.apply_kan_with(Strategy::default(), g, DEFAULT_SUBDISK_CAP)
    }

    pub fn apply_kan_with(
        &self,
        strategy: Strategy,
        g: &Graph,
        cap: usize,
    ) -> Result<Graph, DynamicsError> {
        self.check_signature(g)?;
        let r = self.radius();
        let vertices: Vec<&VertexName> = g.vertices().iter().collect();
        let per_vertex = strategy.try_map(&vertices, |v| enumerate_subdisks(g, v, r, cap))?;
        let disks: Vec<PointedGraph> = per_vertex.into_iter().flatten().collect();
        let outputs = strategy.try_map(&disks, |d| self.rule.eval(d))?;

        // Many sub-disks share an output; merge each distinct output once,
        // remembering the first disk that produced it.
        let mut distinct: BTreeMap<&Graph, usize> = BTreeMap::new();
        for (i, out) in outputs.iter().enumerate() {
            distinct.entry(out).or_insert(i);
        }
        let mut order: Vec<(usize, &Graph)> = distinct.into_iter().map(|(g, i)| (i, g)).collect();
        order.sort_by_key(|(i, _)| *i);

        let mut acc = UnionBuilder::new(self.signature().clone());
        for (k, &(i, out)) in order.iter().enumerate() {
            if let Some(conflict) = acc.conflict(out).expect("same signature") {
                let (j, _) = order[..k]
                    .iter()
                    .find(|(_, prev)| prev.conflict_with(out).ok().flatten().is_some())
                    .expect("some earlier output conflicts");
                return Err(DynamicsError::KanUndefined {
                    first: Box::new(disks[*j].clone()),
                    second: Box::new(disks[i].clone()),
                    conflict,
                });
            }
            acc.absorb(out);
        }
        Ok(acc.finish())
    }

    /// `steps` iterations of [`Dynamics::apply_cgd`], starting with `g`
    /// itself.
    pub fn iterate(&self, g: &Graph, steps: usize) -> Result<Vec<Graph>, DynamicsError> {
        let mut out = vec![g.clone()];
        for _ in 0..steps {
            let next = self.apply_cgd(out.last().expect("non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// A conjugate of `r`: a renaming `r'` with `F(r(G)) = r'(F(G))`.
    /// Rules name fresh vertices by extending input names, so `r` acting on
    /// derived names is one.
    pub fn conjugate(&self, r: &Renaming) -> Renaming {
        r.clone()
    }
}

/// The rule `(H, c) ↦ F(H)` induced by a dynamics, evaluated lazily and
/// memoized by canonical disk.
pub struct InducedRule {
    dynamics: Dynamics,
    memo: Memo,
}

/// The local rule induced by `dynamics`, of the same radius.
pub fn induced_rule(dynamics: &Dynamics) -> InducedRule {
    InducedRule {
        dynamics: dynamics.clone(),
        memo: Memo::new(),
    }
}

impl InducedRule {
    /// Materialize the rule over a finite set of disks.
    pub fn tabulate(&self, domain: &[CanonicalDisk]) -> Result<RuleTable, RuleError> {
        RuleTable::tabulate(self.signature().clone(), self.radius(), true, domain, |d| {
            self.eval(d)
        })
    }
}

impl LocalRule for InducedRule {
    fn radius(&self) -> usize {
        self.dynamics.radius()
    }

    fn signature(&self) -> &Arc<Signature> {
        self.dynamics.signature()
    }

    fn eval(&self, disk: &PointedGraph) -> Result<Graph, RuleError> {
        check_input(self, disk)?;
        eval_via_canonical(disk, |canon| {
            if let Some(out) = self.memo.get(canon) {
                return Ok(out);
            }
            let out = self
                .dynamics
                .apply_cgd_with(Strategy::Sequential, &canon.disk().graph)
                .map_err(|e| match e {
                    DynamicsError::Rule(r) => r,
                    DynamicsError::Disk(d) => RuleError::Disk(d),
                    DynamicsError::Inconsistent { conflict, .. }
                    | DynamicsError::KanUndefined { conflict, .. } => {
                        GraphError::Inconsistent(Box::new(conflict)).into()
                    }
                    DynamicsError::SignatureMismatch => RuleError::SignatureMismatch,
                })?;
            self.memo.insert(canon.clone(), out.clone());
            Ok(out)
        })
    }
}
