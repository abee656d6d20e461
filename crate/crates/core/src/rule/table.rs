//! Finite rule tables keyed by canonical disks.

use std::collections::HashMap;
use std::sync::Arc;

use crate::disk::{is_disk_of_radius, PointedGraph};
use crate::graph::{Graph, Signature};

use super::{canonicalize, check_input, eval_via_canonical, CanonicalDisk, LocalRule, RuleError};

/// A local rule given by its values on canonical disks. Disks without an
/// entry map to the empty graph when `default_empty` is set and are an
/// error otherwise.
///
/// Outputs are stored over the canonical names of their key: every output
/// vertex is `v{k}` or a tagged extension `v{k}.t` of a key vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    signature: Arc<Signature>,
    radius: usize,
    entries: HashMap<CanonicalDisk, Graph>,
    default_empty: bool,
}

impl RuleTable {
    pub fn new(signature: Arc<Signature>, radius: usize, default_empty: bool) -> Self {
        RuleTable {
            signature,
            radius,
            entries: HashMap::new(),
            default_empty,
        }
    }

    /// Tabulate `f` over `domain`.
    pub fn tabulate(
        signature: Arc<Signature>,
        radius: usize,
        default_empty: bool,
        domain: &[CanonicalDisk],
        mut f: impl FnMut(&PointedGraph) -> Result<Graph, RuleError>,
    ) -> Result<Self, RuleError> {
        let mut t = RuleTable::new(signature, radius, default_empty);
        for d in domain {
            let out = f(d.disk())?;
            t.insert(d.disk(), out)?;
        }
        Ok(t)
    }

    pub fn default_empty(&self) -> bool {
        self.default_empty
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CanonicalDisk) -> Option<&Graph> {
        self.entries.get(key)
    }

    /// Entries in ascending key order.
    pub fn entries(&self) -> Vec<(&CanonicalDisk, &Graph)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort();
        v
    }

    /// Record `f(disk) = output`, with `output` over `disk`'s names.
    pub fn insert(&mut self, disk: &PointedGraph, output: Graph) -> Result<(), RuleError> {
        self.check_key(disk)?;
        let (canon, witness) = canonicalize(disk)?;
        let mapped = if output.is_empty() {
            Graph::empty(self.signature.clone())
        } else {
            if let Some(v) = output
                .vertices()
                .iter()
                .find(|v| witness.apply_derived(v).is_none())
            {
                return Err(RuleError::BadOutputName(v.clone()));
            }
            witness
                .apply_graph_derived(&output)
                .ok_or(RuleError::NameCollision)?
        };
        self.put(canon, mapped)
    }

    /// Record an entry whose key is already canonical and whose output is
    /// over the key's names. Non-canonical keys are rejected.
    pub fn insert_canonical(&mut self, key: PointedGraph, output: Graph) -> Result<(), RuleError> {
        self.check_key(&key)?;
        let (canon, witness) = canonicalize(&key)?;
        if canon.disk() != &key || !witness.is_identity() {
            return Err(RuleError::NonCanonicalKey(key));
        }
        if let Some(v) = output
            .vertices()
            .iter()
            .find(|v| witness.apply_derived(v).is_none())
        {
            return Err(RuleError::BadOutputName(v.clone()));
        }
        self.put(canon, output)
    }

    fn check_key(&self, disk: &PointedGraph) -> Result<(), RuleError> {
        if *disk.graph.signature() != self.signature {
            return Err(RuleError::SignatureMismatch);
        }
        if !is_disk_of_radius(disk, self.radius) {
            return Err(RuleError::WrongRadius {
                radius: self.radius,
                disk: disk.clone(),
            });
        }
        Ok(())
    }

    fn put(&mut self, key: CanonicalDisk, output: Graph) -> Result<(), RuleError> {
        if *output.signature() != self.signature {
            return Err(RuleError::SignatureMismatch);
        }
        match self.entries.get(&key) {
            Some(prev) if prev != &output => Err(RuleError::DuplicateEntry(key.into_disk())),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, output);
                Ok(())
            }
        }
    }

    /// Largest output size over the table.
    pub fn bound(&self) -> usize {
        self.entries
            .values()
            .map(Graph::vertex_count)
            .max()
            .unwrap_or(0)
    }
}

impl LocalRule for RuleTable {
    fn radius(&self) -> usize {
        self.radius
    }

    fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    fn eval(&self, disk: &PointedGraph) -> Result<Graph, RuleError> {
        check_input(self, disk)?;
        eval_via_canonical(disk, |canon| match self.entries.get(canon) {
            Some(out) => Ok(out.clone()),
            None if self.default_empty => Ok(Graph::empty(self.signature.clone())),
            None => Err(RuleError::MissingEntry(canon.disk().clone())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Renaming;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x"], &[], &["p"]).unwrap())
    }

    fn single(name: &str) -> PointedGraph {
        PointedGraph::new(
            Graph::builder(&sig()).vertex(name).build().unwrap(),
            name.into(),
        )
        .unwrap()
    }

    #[test]
    fn insert_and_eval_maps_names_back() {
        let mut t = RuleTable::new(sig(), 1, true);
        let out = Graph::builder(&sig())
            .edge(("a", "p"), ("a.0", "p"))
            .build()
            .unwrap();
        t.insert(&single("a"), out).unwrap();
        let got = t.eval(&single("q")).unwrap();
        let want = Graph::builder(&sig())
            .edge(("q", "p"), ("q.0", "p"))
            .build()
            .unwrap();
        assert_eq!(got, want);
        let r = Renaming::swap("q", "w");
        assert_eq!(t.eval(&single("w")).unwrap(), r.apply_graph(&got));
    }

    #[test]
    fn foreign_output_names_rejected() {
        let mut t = RuleTable::new(sig(), 1, true);
        let out = Graph::builder(&sig()).vertex("zz").build().unwrap();
        assert_eq!(
            t.insert(&single("a"), out),
            Err(RuleError::BadOutputName("zz".into()))
        );
    }

    #[test]
    fn default_and_missing() {
        let t = RuleTable::new(sig(), 1, true);
        assert!(t.eval(&single("a")).unwrap().is_empty());
        let strict = RuleTable::new(sig(), 1, false);
        assert!(matches!(
            strict.eval(&single("a")),
            Err(RuleError::MissingEntry(_))
        ));
    }

    #[test]
    fn wrong_radius_rejected() {
        let g = Graph::builder(&sig())
            .labeled("a", "x")
            .labeled("b", "x")
            .edge(("a", "p"), ("b", "p"))
            .build()
            .unwrap();
        let d = PointedGraph::new(g, "a".into()).unwrap();
        let t = RuleTable::new(sig(), 0, true);
        assert!(matches!(t.eval(&d), Err(RuleError::WrongRadius { .. })));
    }

    #[test]
    fn non_canonical_key_rejected() {
        let mut t = RuleTable::new(sig(), 1, true);
        let e = Graph::empty(sig());
        assert!(matches!(
            t.insert_canonical(single("a"), e.clone()),
            Err(RuleError::NonCanonicalKey(_))
        ));
        assert!(t.insert_canonical(single("v0"), e).is_ok());
    }
}
