//! Renamings of vertex names.
//!
//! A [`Renaming`] is a finite-support permutation of base symbols. It acts on
//! a hierarchical name by renaming the base and keeping the tags, so it is
//! its own conjugate for every rule whose fresh vertices are derived names.
//!
//! A [`NameMap`] is a finite injection between whole names. Canonical
//! witnesses and category morphisms use it; it extends to derived names by
//! longest-prefix matching.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{Edge, Graph, GraphError, Label, VertexName};

/// Finite-support bijection on base symbols; identity off its support.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Renaming {
    forward: BTreeMap<Arc<str>, Arc<str>>,
    backward: BTreeMap<Arc<str>, Arc<str>>,
}

impl Renaming {
    pub fn identity() -> Self {
        Renaming::default()
    }

    /// The transposition of two bases.
    pub fn swap(a: &str, b: &str) -> Self {
        Renaming::from_pairs([(a, b), (b, a)]).expect("a transposition is a bijection")
    }

    /// A renaming given by its non-trivial part. The listed pairs must form
    /// a permutation of their support.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (a, b) in pairs {
            let (a, b): (Arc<str>, Arc<str>) = (Arc::from(a), Arc::from(b));
            if forward.insert(a.clone(), b.clone()).is_some() || backward.insert(b, a).is_some() {
                return Err(GraphError::BadRenaming);
            }
        }
        let dom: BTreeSet<_> = forward.keys().collect();
        let img: BTreeSet<_> = backward.keys().collect();
        if dom != img {
            return Err(GraphError::BadRenaming);
        }
        Ok(Renaming::normalized(forward))
    }

    /// Complete an injective partial map on bases into a permutation that
    /// agrees with it. Chains `a -> b -> ...` leaving the domain are closed
    /// back onto their start.
    pub fn from_injection<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut forward: BTreeMap<Arc<str>, Arc<str>> = BTreeMap::new();
        let mut seen_images = BTreeSet::new();
        for (a, b) in pairs {
            let (a, b): (Arc<str>, Arc<str>) = (Arc::from(a), Arc::from(b));
            if !seen_images.insert(b.clone()) {
                return Err(GraphError::BadRenaming);
            }
            if let Some(prev) = forward.insert(a, b.clone()) {
                if prev != b {
                    return Err(GraphError::BadRenaming);
                }
            }
        }
        let domain: BTreeSet<Arc<str>> = forward.keys().cloned().collect();
        let images: BTreeSet<Arc<str>> = forward.values().cloned().collect();
        // Images outside the domain end open chains; starts outside the image
        // begin them. Pair the ends with the starts to close every chain.
        let mut ends: Vec<Arc<str>> = images.difference(&domain).cloned().collect();
        let starts: Vec<Arc<str>> = domain.difference(&images).cloned().collect();
        ends.sort();
        for end in ends {
            // follow backwards to the start of this chain
            let mut cur = end.clone();
            loop {
                let pred = forward
                    .iter()
                    .find(|(_, v)| **v == cur)
                    .map(|(k, _)| k.clone());
                match pred {
                    Some(p) if starts.contains(&p) => {
                        cur = p;
                        break;
                    }
                    Some(p) => cur = p,
                    None => break,
                }
            }
            forward.insert(end, cur);
        }
        Ok(Renaming::normalized(forward))
    }

    fn normalized(forward: BTreeMap<Arc<str>, Arc<str>>) -> Self {
        let forward: BTreeMap<_, _> = forward.into_iter().filter(|(a, b)| a != b).collect();
        let backward = forward
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        Renaming { forward, backward }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_empty()
    }

    /// Bases moved by this renaming.
    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.forward.keys().map(|k| &**k)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.forward.iter().map(|(a, b)| (&**a, &**b))
    }

    pub fn apply_base<'a>(&'a self, base: &'a Arc<str>) -> &'a Arc<str> {
        self.forward.get(base).unwrap_or(base)
    }

    pub fn apply_name(&self, v: &VertexName) -> VertexName {
        match self.forward.get(v.base_arc()) {
            Some(b) => v.rebase(b),
            None => v.clone(),
        }
    }

    pub fn inverse(&self) -> Renaming {
        Renaming {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Renaming) -> Renaming {
        let mut support: BTreeSet<Arc<str>> = self.forward.keys().cloned().collect();
        support.extend(other.forward.keys().cloned());
        let forward = support
            .into_iter()
            .map(|a| {
                let b = self.apply_base(other.apply_base(&a)).clone();
                (a, b)
            })
            .collect();
        Renaming::normalized(forward)
    }

    pub fn apply_graph(&self, g: &Graph) -> Graph {
        if self.is_identity() {
            return g.clone();
        }
        map_graph_unchecked(g, |v| self.apply_name(v))
    }
}

/// Rebuild a graph through a vertex map that is known to be injective.
pub(crate) fn map_graph_unchecked(
    g: &Graph,
    mut f: impl FnMut(&VertexName) -> VertexName,
) -> Graph {
    let names: BTreeMap<&VertexName, VertexName> = g.vertices().iter().map(|v| (v, f(v))).collect();
    let map = |v: &VertexName| names[v].clone();
    let vertices = names.values().cloned().collect();
    let edges: BTreeSet<Edge> = g.edges().iter().map(|e| e.map_vertices(map)).collect();
    let vlabels: BTreeMap<VertexName, Label> = g
        .vertex_labels()
        .iter()
        .map(|(v, l)| (map(v), l.clone()))
        .collect();
    let elabels: BTreeMap<Edge, Label> = g
        .edge_labels()
        .iter()
        .map(|(e, l)| (e.map_vertices(map), l.clone()))
        .collect();
    Graph::assemble(g.signature().clone(), vertices, edges, vlabels, elabels)
}

/// Finite injection on whole vertex names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct NameMap {
    map: BTreeMap<VertexName, VertexName>,
}

impl NameMap {
    pub fn new() -> Self {
        NameMap::default()
    }

    /// The identity on `names`.
    pub fn identity_on<'a>(names: impl IntoIterator<Item = &'a VertexName>) -> Self {
        NameMap {
            map: names.into_iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (VertexName, VertexName)>,
    ) -> Result<Self, GraphError> {
        let mut m = NameMap::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    /// Add `a ↦ b`, refusing anything that breaks injectivity.
    pub fn insert(&mut self, a: VertexName, b: VertexName) -> Result<(), GraphError> {
        if let Some(prev) = self.map.get(&a) {
            return if prev == &b {
                Ok(())
            } else {
                Err(GraphError::BadRenaming)
            };
        }
        if self.map.values().any(|v| v == &b) {
            return Err(GraphError::BadRenaming);
        }
        self.map.insert(a, b);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: &VertexName) -> Option<&VertexName> {
        self.map.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexName, &VertexName)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &VertexName> {
        self.map.keys()
    }

    pub fn image(&self) -> impl Iterator<Item = &VertexName> {
        self.map.values()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn inverse(&self) -> NameMap {
        NameMap {
            map: self
                .map
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// `self ∘ other`, defined on the part of `other`'s domain whose image
    /// lies in `self`'s domain.
    pub fn compose(&self, other: &NameMap) -> NameMap {
        NameMap {
            map: other
                .map
                .iter()
                .filter_map(|(a, b)| self.map.get(b).map(|c| (a.clone(), c.clone())))
                .collect(),
        }
    }

    /// Restriction to a set of names.
    pub fn restrict(&self, keep: &BTreeSet<VertexName>) -> NameMap {
        NameMap {
            map: self
                .map
                .iter()
                .filter(|(a, _)| keep.contains(*a))
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// Extension to derived names: `p.t ↦ m(p).t` for the longest prefix `p`
    /// of the argument in the domain.
    pub fn apply_derived(&self, v: &VertexName) -> Option<VertexName> {
        if let Some(b) = self.map.get(v) {
            return Some(b.clone());
        }
        v.prefixes().skip(1).find_map(|p| {
            self.map
                .get(&p)
                .map(|b| b.extend(v.strip_prefix(&p).expect("p is a prefix of v")))
        })
    }

    /// Image of a graph whose vertices all lie in the domain.
    pub fn apply_graph(&self, g: &Graph) -> Option<Graph> {
        if !g.vertices().iter().all(|v| self.map.contains_key(v)) {
            return None;
        }
        Some(map_graph_unchecked(g, |v| self.map[v].clone()))
    }

    /// Image of a graph under the derived-name extension. `None` if some
    /// vertex has no prefix in the domain or two vertices collide.
    pub fn apply_graph_derived(&self, g: &Graph) -> Option<Graph> {
        let mut seen = BTreeSet::new();
        let mut names = BTreeMap::new();
        for v in g.vertices() {
            let w = self.apply_derived(v)?;
            if !seen.insert(w.clone()) {
                return None;
            }
            names.insert(v.clone(), w);
        }
        Some(map_graph_unchecked(g, |v| names[v].clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Signature;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x"], &[], &["l", "r"]).unwrap())
    }

    #[test]
    fn swap_acts_on_bases_only() {
        let r = Renaming::swap("a", "b");
        assert_eq!(r.apply_name(&"a.3".into()), "b.3".into());
        assert_eq!(r.apply_name(&"c".into()), "c".into());
    }

    #[test]
    fn swap_on_edge_graph() {
        let s = sig();
        let g = Graph::builder(&s)
            .labeled("a", "x")
            .edge(("a", "l"), ("b", "r"))
            .build()
            .unwrap();
        let want = Graph::builder(&s)
            .labeled("b", "x")
            .edge(("b", "l"), ("a", "r"))
            .build()
            .unwrap();
        let r = Renaming::swap("a", "b");
        assert_eq!(r.apply_graph(&g), want);
        assert_eq!(r.inverse().apply_graph(&want), g);
    }

    #[test]
    fn from_pairs_rejects_non_permutations() {
        assert!(Renaming::from_pairs([("a", "b")]).is_err());
        assert!(Renaming::from_pairs([("a", "b"), ("b", "c"), ("c", "a")]).is_ok());
    }

    #[test]
    fn injection_completion_agrees() {
        let r = Renaming::from_injection([("a", "x"), ("b", "a")]).unwrap();
        assert_eq!(&**r.apply_base(&Arc::from("a")), "x");
        assert_eq!(&**r.apply_base(&Arc::from("b")), "a");
        assert_eq!(r.compose(&r.inverse()), Renaming::identity());
        let img: BTreeSet<_> = r.pairs().map(|(_, b)| b.to_string()).collect();
        let dom: BTreeSet<_> = r.support().map(str::to_string).collect();
        assert_eq!(img, dom);
    }

    #[test]
    fn compose_order() {
        let ab = Renaming::swap("a", "b");
        let bc = Renaming::swap("b", "c");
        // apply ab first: a -> b, then bc: b -> c
        let r = bc.compose(&ab);
        assert_eq!(r.apply_name(&"a".into()), "c".into());
    }

    #[test]
    fn name_map_derived_extension() {
        let m =
            NameMap::from_pairs([("v0".into(), "a".into()), ("v1".into(), "b.2".into())]).unwrap();
        assert_eq!(m.apply_derived(&"v1.0".into()), Some("b.2.0".into()));
        assert_eq!(m.apply_derived(&"v2".into()), None);
        assert!(m.clone().insert("v3".into(), "a".into()).is_err());
    }
}
