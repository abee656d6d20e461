//! Canonical forms of disks.
//!
//! A connected pointed port graph has no non-trivial automorphism fixing its
//! center: starting from the center, the port an edge leaves from pins down
//! the neighbor it reaches. A breadth-first traversal that visits ports in
//! sorted order therefore numbers the vertices in a way that depends only on
//! structure, and renaming vertex `k` to `v{k}` gives a canonical form.

use std::collections::{BTreeMap, VecDeque};

use crate::disk::PointedGraph;
use crate::graph::{Endpoint, NameMap, Port, VertexName};

use super::RuleError;

/// A disk in canonical form: vertices are `v0` (the center), `v1`, ...
/// numbered by a port-ordered breadth-first traversal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalDisk(PointedGraph);

impl CanonicalDisk {
    pub fn disk(&self) -> &PointedGraph {
        &self.0
    }

    pub fn into_disk(self) -> PointedGraph {
        self.0
    }
}

/// Name of the `k`-th vertex in canonical order.
pub fn canonical_name(k: usize) -> VertexName {
    VertexName::new(&format!("v{k}"))
}

/// The canonical form of `d` and the witness map from `d`'s names to the
/// canonical names.
pub fn canonicalize(d: &PointedGraph) -> Result<(CanonicalDisk, NameMap), RuleError> {
    let g = &d.graph;
    let mut ports: BTreeMap<&VertexName, BTreeMap<&Port, &Endpoint>> = BTreeMap::new();
    for e in g.edges() {
        let [a, b] = e.ends();
        ports.entry(&a.vertex).or_default().insert(&a.port, b);
        ports.entry(&b.vertex).or_default().insert(&b.port, a);
    }
    let mut order: BTreeMap<&VertexName, usize> = BTreeMap::new();
    order.insert(&d.center, 0);
    let mut queue = VecDeque::from([&d.center]);
    while let Some(u) = queue.pop_front() {
        if let Some(slots) = ports.get(u) {
            for other in slots.values() {
                if !order.contains_key(&other.vertex) {
                    order.insert(&other.vertex, order.len());
                    queue.push_back(&other.vertex);
                }
            }
        }
    }
    if order.len() != g.vertex_count() {
        return Err(RuleError::Disconnected);
    }
    let witness = NameMap::from_pairs(
        order
            .into_iter()
            .map(|(v, k)| (v.clone(), canonical_name(k))),
    )
    .expect("canonical names are distinct");
    let graph = witness.apply_graph(g).expect("witness covers every vertex");
    Ok((
        CanonicalDisk(PointedGraph {
            graph,
            center: canonical_name(0),
        }),
        witness,
    ))
}

/// Whether `d` is already in canonical form.
pub fn is_canonical(d: &PointedGraph) -> bool {
    canonicalize(d).is_ok_and(|(c, w)| c.0 == *d && w.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Renaming, Signature};
    use std::sync::Arc;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x"], &[], &["l", "r"]).unwrap())
    }

    fn disk(names: [&str; 3], center: &str) -> PointedGraph {
        let g = Graph::builder(&sig())
            .labeled(names[1], "x")
            .edge((names[0], "r"), (names[1], "l"))
            .edge((names[1], "r"), (names[2], "l"))
            .build()
            .unwrap();
        PointedGraph::new(g, center.into()).unwrap()
    }

    #[test]
    fn canonical_is_idempotent() {
        let (c, _) = canonicalize(&disk(["a", "b", "c"], "b")).unwrap();
        let (c2, w2) = canonicalize(c.disk()).unwrap();
        assert_eq!(c, c2);
        assert!(w2.is_identity());
        assert!(is_canonical(c.disk()));
    }

    #[test]
    fn same_shape_same_form() {
        let (c1, w1) = canonicalize(&disk(["a", "b", "c"], "b")).unwrap();
        let (c2, w2) = canonicalize(&disk(["p", "q", "s"], "q")).unwrap();
        assert_eq!(c1, c2);
        assert_ne!(w1, w2);
    }

    #[test]
    fn invariant_under_renaming() {
        let d = disk(["a", "b", "z"], "b");
        let r = Renaming::swap("a", "z");
        let rd = PointedGraph::new(r.apply_graph(&d.graph), r.apply_name(&d.center)).unwrap();
        assert_eq!(canonicalize(&d).unwrap().0, canonicalize(&rd).unwrap().0);
    }

    #[test]
    fn center_matters() {
        let (c1, _) = canonicalize(&disk(["a", "b", "c"], "a")).unwrap();
        let (c2, _) = canonicalize(&disk(["a", "b", "c"], "b")).unwrap();
        assert_ne!(c1, c2);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::builder(&sig())
            .vertex("a")
            .vertex("b")
            .build()
            .unwrap();
        let d = PointedGraph::new(g, "a".into()).unwrap();
        assert_eq!(canonicalize(&d), Err(RuleError::Disconnected));
    }
}
