//! Validators for the four local-rule conditions and for monotonicity.

use std::collections::BTreeSet;

use crate::disk::{enumerate_subdisks, extract_disk, DiskError, PointedGraph};
use crate::exec::Strategy;
use crate::graph::{Graph, Renaming, VertexName};

use super::{LocalRule, RuleError, RuleTable};

/// Condition (1): `f(R(D)) = R(f(D))` on every sample, the conjugate of a
/// renaming being the renaming itself acting on derived names.
pub fn check_equivariance(
    rule: &(impl LocalRule + ?Sized),
    samples: &[(Renaming, PointedGraph)],
) -> Result<bool, RuleError> {
    for (r, d) in samples {
        let moved = PointedGraph {
            graph: r.apply_graph(&d.graph),
            center: r.apply_name(&d.center),
        };
        if rule.eval(&moved)? != r.apply_graph(&rule.eval(d)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Condition (2) on one family: if the disks share no vertex, neither do
/// their outputs.
pub fn check_disjointness(
    rule: &(impl LocalRule + ?Sized),
    family: &[PointedGraph],
) -> Result<bool, RuleError> {
    let Some((first, rest)) = family.split_first() else {
        return Ok(true);
    };
    let mut common: BTreeSet<VertexName> = first.graph.vertices().clone();
    for d in rest {
        common.retain(|v| d.graph.contains_vertex(v));
    }
    if !common.is_empty() {
        return Ok(true);
    }
    let mut out_common: Option<BTreeSet<VertexName>> = None;
    for d in family {
        let vs = rule.eval(d)?.vertices().clone();
        out_common = Some(match out_common {
            None => vs,
            Some(c) => c.intersection(&vs).cloned().collect(),
        });
    }
    Ok(out_common.is_none_or(|c| c.is_empty()))
}

/// Condition (3): the witness bound of a table, its largest output.
pub fn check_bound(table: &RuleTable) -> usize {
    table.bound()
}

/// Largest output size of `rule` over `domain`.
pub fn observed_bound(
    rule: &(impl LocalRule + ?Sized),
    domain: &[PointedGraph],
) -> Result<usize, RuleError> {
    let mut b = 0;
    for d in domain {
        b = b.max(rule.eval(d)?.vertex_count());
    }
    Ok(b)
}

/// Condition (4) on one graph: the outputs at any two vertices are
/// consistent.
pub fn check_consistency(rule: &(impl LocalRule + ?Sized), g: &Graph) -> Result<bool, RuleError> {
    let outs = g
        .vertices()
        .iter()
        .map(|v| rule.eval(&extract_disk(g, v, rule.radius())?))
        .collect::<Result<Vec<_>, RuleError>>()?;
    for (i, a) in outs.iter().enumerate() {
        for b in &outs[i + 1..] {
            if !a.consistent(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of [`check_monotonic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotonicityVerdict {
    /// Every compared pair was ordered correctly.
    Monotonic { pairs: usize },
    /// `smaller ⊆ larger` (same center) but `f(smaller) ⊄ f(larger)`.
    Counterexample {
        smaller: PointedGraph,
        larger: PointedGraph,
    },
    /// The budget ran out before every pair was compared; no violation was
    /// seen among those that were.
    Inconclusive { pairs: usize },
}

impl MonotonicityVerdict {
    pub fn is_monotonic(&self) -> bool {
        matches!(self, MonotonicityVerdict::Monotonic { .. })
    }
}

/// Compare `f(D) ⊆ f(D')` for every disk `D'` of `domain` and every
/// same-center sub-disk `D ⊆ D'`. At most `budget` pairs are compared.
pub fn check_monotonic(
    rule: &(impl LocalRule + ?Sized),
    domain: &[PointedGraph],
    budget: usize,
) -> Result<MonotonicityVerdict, RuleError> {
    check_monotonic_with(Strategy::default(), rule, domain, budget)
}

pub fn check_monotonic_with(
    strategy: Strategy,
    rule: &(impl LocalRule + ?Sized),
    domain: &[PointedGraph],
    budget: usize,
) -> Result<MonotonicityVerdict, RuleError> {
    struct Item {
        pairs: usize,
        truncated: bool,
        counterexample: Option<(PointedGraph, PointedGraph)>,
    }
    let r = rule.radius();
    let items = strategy.try_map(domain, |larger| -> Result<Item, RuleError> {
        let subs = match enumerate_subdisks(&larger.graph, &larger.center, r, budget) {
            Ok(s) => s,
            Err(DiskError::CapExceeded(_)) => {
                return Ok(Item {
                    pairs: 0,
                    truncated: true,
                    counterexample: None,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let big = rule.eval(larger)?;
        for (i, smaller) in subs.iter().enumerate() {
            if !rule.eval(smaller)?.is_subgraph(&big) {
                return Ok(Item {
                    pairs: i + 1,
                    truncated: false,
                    counterexample: Some((smaller.clone(), larger.clone())),
                });
            }
        }
        Ok(Item {
            pairs: subs.len(),
            truncated: false,
            counterexample: None,
        })
    })?;
    let mut pairs = 0usize;
    let mut truncated = false;
    for item in items {
        if let Some((smaller, larger)) = item.counterexample {
            return Ok(MonotonicityVerdict::Counterexample { smaller, larger });
        }
        pairs += item.pairs;
        truncated |= item.truncated;
    }
    if truncated || pairs > budget {
        Ok(MonotonicityVerdict::Inconclusive { pairs })
    } else {
        Ok(MonotonicityVerdict::Monotonic { pairs })
    }
}
