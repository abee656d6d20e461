//! Labeled port graphs and the subgraph lattice.
//!
//! A [`Graph`] is a finite set of named vertices, a set of edges between
//! `(vertex, port)` endpoints (each endpoint used at most once), and partial
//! labelings of vertices and edges. Graphs are immutable values: every
//! operation returns a fresh graph.
//!
//! The subgraph order is componentwise inclusion of the four parts.
//! [`Graph::union`] is its least upper bound (defined only on consistent
//! pairs) and [`Graph::intersection`] its greatest lower bound.

mod name;
mod renaming;

pub use name::{Label, Port, VertexName};
pub use renaming::{NameMap, Renaming};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Vertex labels, edge labels and ports available to a family of graphs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Signature {
    sigma: BTreeSet<Label>,
    delta: BTreeSet<Label>,
    pi: BTreeSet<Port>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(sigma: &[S], delta: &[S], pi: &[S]) -> Result<Self, GraphError> {
        let sig = Signature {
            sigma: sigma.iter().map(|s| Label::new(s.as_ref())).collect(),
            delta: delta.iter().map(|s| Label::new(s.as_ref())).collect(),
            pi: pi.iter().map(|s| Port::new(s.as_ref())).collect(),
        };
        if sig.pi.is_empty() {
            return Err(GraphError::NoPorts);
        }
        Ok(sig)
    }

    pub fn from_sets(
        sigma: BTreeSet<Label>,
        delta: BTreeSet<Label>,
        pi: BTreeSet<Port>,
    ) -> Result<Self, GraphError> {
        if pi.is_empty() {
            return Err(GraphError::NoPorts);
        }
        Ok(Signature { sigma, delta, pi })
    }

    pub fn sigma(&self) -> &BTreeSet<Label> {
        &self.sigma
    }

    pub fn delta(&self) -> &BTreeSet<Label> {
        &self.delta
    }

    pub fn pi(&self) -> &BTreeSet<Port> {
        &self.pi
    }
}

/// A `vertex:port` slot.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub vertex: VertexName,
    pub port: Port,
}

impl Endpoint {
    pub fn new(vertex: impl Into<VertexName>, port: impl Into<Port>) -> Self {
        Endpoint {
            vertex: vertex.into(),
            port: port.into(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex, self.port)
    }
}

impl fmt::Debug for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An unordered pair of distinct endpoints. Stored sorted, so structural
/// equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    ends: [Endpoint; 2],
}

impl Edge {
    pub fn new(a: Endpoint, b: Endpoint) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { ends: [a, b] }),
            std::cmp::Ordering::Greater => Ok(Edge { ends: [b, a] }),
            std::cmp::Ordering::Equal => Err(GraphError::DegenerateEdge(a)),
        }
    }

    pub fn ends(&self) -> &[Endpoint; 2] {
        &self.ends
    }

    /// The endpoint opposite to `e`, if `e` is one of the two ends.
    pub fn other(&self, e: &Endpoint) -> Option<&Endpoint> {
        if &self.ends[0] == e {
            Some(&self.ends[1])
        } else if &self.ends[1] == e {
            Some(&self.ends[0])
        } else {
            None
        }
    }

    pub fn touches(&self, v: &VertexName) -> bool {
        &self.ends[0].vertex == v || &self.ends[1].vertex == v
    }

    /// Both ends on the same vertex (via two different ports).
    pub fn is_self_loop(&self) -> bool {
        self.ends[0].vertex == self.ends[1].vertex
    }

    pub fn map_vertices(&self, mut f: impl FnMut(&VertexName) -> VertexName) -> Edge {
        let a = Endpoint {
            vertex: f(&self.ends[0].vertex),
            port: self.ends[0].port.clone(),
        };
        let b = Endpoint {
            vertex: f(&self.ends[1].vertex),
            port: self.ends[1].port.clone(),
        };
        Edge::new(a, b).expect("injective vertex map keeps endpoints distinct")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.ends[0], self.ends[1])
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// First disagreement found between two graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conflict {
    PortClash {
        endpoint: Endpoint,
        left: Edge,
        right: Edge,
    },
    VertexLabel {
        vertex: VertexName,
        left: Label,
        right: Label,
    },
    EdgeLabel {
        edge: Edge,
        left: Label,
        right: Label,
    },
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::PortClash {
                endpoint,
                left,
                right,
            } => write!(f, "{endpoint} used by both {left} and {right}"),
            Conflict::VertexLabel {
                vertex,
                left,
                right,
            } => {
                write!(f, "vertex {vertex} labeled both {left} and {right}")
            }
            Conflict::EdgeLabel { edge, left, right } => {
                write!(f, "edge {edge} labeled both {left} and {right}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid vertex name {0:?}")]
    BadName(String),
    #[error("name map is not a bijection on its support")]
    BadRenaming,
    #[error("a signature needs at least one port")]
    NoPorts,
    #[error("graphs are over different signatures")]
    SignatureMismatch,
    #[error("edge with both ends at {0}")]
    DegenerateEdge(Endpoint),
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingEdge { edge: Edge, vertex: VertexName },
    #[error("port {0} is not in the signature")]
    UnknownPort(Port),
    #[error("vertex label {0} is not in the signature")]
    UnknownVertexLabel(Label),
    #[error("edge label {0} is not in the signature")]
    UnknownEdgeLabel(Label),
    #[error("endpoint {} used by both {} and {}", .0.0, .0.1, .0.2)]
    PortClash(Box<(Endpoint, Edge, Edge)>),
    #[error("label on missing vertex {0}")]
    LabelOnMissingVertex(VertexName),
    #[error("label on missing edge {0}")]
    LabelOnMissingEdge(Edge),
    #[error("inconsistent graphs: {0}")]
    Inconsistent(Box<Conflict>),
}

/// The signature, vertices, edges, vertex labels and edge labels of a graph.
pub type GraphParts = (
    Arc<Signature>,
    BTreeSet<VertexName>,
    BTreeSet<Edge>,
    BTreeMap<VertexName, Label>,
    BTreeMap<Edge, Label>,
);

/// A finite labeled port graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    signature: Arc<Signature>,
    vertices: BTreeSet<VertexName>,
    edges: BTreeSet<Edge>,
    vlabels: BTreeMap<VertexName, Label>,
    elabels: BTreeMap<Edge, Label>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| match self.vlabels.get(v) {
                Some(l) => format!("{v}={l}"),
                None => v.to_string(),
            })
            .collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| match self.elabels.get(e) {
                Some(l) => format!("{e}={l}"),
                None => e.to_string(),
            })
            .collect();
        write!(f, "Graph[{}; {}]", vs.join(" "), es.join(" "))
    }
}

impl Graph {
    pub fn empty(signature: Arc<Signature>) -> Self {
        Graph {
            signature,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
            vlabels: BTreeMap::new(),
            elabels: BTreeMap::new(),
        }
    }

    pub fn builder(signature: &Arc<Signature>) -> GraphBuilder {
        GraphBuilder {
            graph: Graph::empty(signature.clone()),
            pending_edges: Vec::new(),
        }
    }

    /// Build a graph from its four components, checking every invariant.
    pub fn from_parts(
        signature: Arc<Signature>,
        vertices: BTreeSet<VertexName>,
        edges: BTreeSet<Edge>,
        vlabels: BTreeMap<VertexName, Label>,
        elabels: BTreeMap<Edge, Label>,
    ) -> Result<Self, GraphError> {
        let g = Graph {
            signature,
            vertices,
            edges,
            vlabels,
            elabels,
        };
        g.validate()?;
        Ok(g)
    }

    /// Assemble from parts that are known to satisfy the invariants (e.g.
    /// sub-parts of a valid graph). Checked in debug builds.
    pub(crate) fn assemble(
        signature: Arc<Signature>,
        vertices: BTreeSet<VertexName>,
        edges: BTreeSet<Edge>,
        vlabels: BTreeMap<VertexName, Label>,
        elabels: BTreeMap<Edge, Label>,
    ) -> Self {
        let g = Graph {
            signature,
            vertices,
            edges,
            vlabels,
            elabels,
        };
        debug_assert!(g.validate().is_ok(), "{:?}: {:?}", g, g.validate());
        g
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let mut occupied: BTreeMap<&Endpoint, &Edge> = BTreeMap::new();
        for e in &self.edges {
            for end in e.ends() {
                if !self.vertices.contains(&end.vertex) {
                    return Err(GraphError::DanglingEdge {
                        edge: e.clone(),
                        vertex: end.vertex.clone(),
                    });
                }
                if !self.signature.pi.contains(&end.port) {
                    return Err(GraphError::UnknownPort(end.port.clone()));
                }
                if let Some(prev) = occupied.insert(end, e) {
                    return Err(GraphError::PortClash(Box::new((
                        end.clone(),
                        prev.clone(),
                        e.clone(),
                    ))));
                }
            }
        }
        for (v, l) in &self.vlabels {
            if !self.vertices.contains(v) {
                return Err(GraphError::LabelOnMissingVertex(v.clone()));
            }
            if !self.signature.sigma.contains(l) {
                return Err(GraphError::UnknownVertexLabel(l.clone()));
            }
        }
        for (e, l) in &self.elabels {
            if !self.edges.contains(e) {
                return Err(GraphError::LabelOnMissingEdge(e.clone()));
            }
            if !self.signature.delta.contains(l) {
                return Err(GraphError::UnknownEdgeLabel(l.clone()));
            }
        }
        debug_assert!(self
            .vertices
            .iter()
            .all(|v| self.degree(v) <= self.signature.pi.len()));
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn vertices(&self) -> &BTreeSet<VertexName> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_labels(&self) -> &BTreeMap<VertexName, Label> {
        &self.vlabels
    }

    pub fn edge_labels(&self) -> &BTreeMap<Edge, Label> {
        &self.elabels
    }

    pub fn vertex_label(&self, v: &VertexName) -> Option<&Label> {
        self.vlabels.get(v)
    }

    pub fn edge_label(&self, e: &Edge) -> Option<&Label> {
        self.elabels.get(e)
    }

    pub fn contains_vertex(&self, v: &VertexName) -> bool {
        self.vertices.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edge ends attached to `v` (a self-loop counts twice).
    pub fn degree(&self, v: &VertexName) -> usize {
        self.edges
            .iter()
            .map(|e| e.ends().iter().filter(|end| &end.vertex == v).count())
            .sum()
    }

    /// Edges attached to `v`.
    pub fn edges_at<'a>(&'a self, v: &'a VertexName) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.touches(v))
    }

    /// Map from occupied endpoints to the edge using them.
    pub fn occupancy(&self) -> BTreeMap<&Endpoint, &Edge> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            for end in e.ends() {
                m.insert(end, e);
            }
        }
        m
    }

    /// The edge attached at `v:p`, if any.
    pub fn edge_at(&self, v: &VertexName, p: &Port) -> Option<&Edge> {
        self.edges.iter().find(|e| {
            e.ends()
                .iter()
                .any(|end| &end.vertex == v && &end.port == p)
        })
    }

    /// Undirected adjacency lists, ignoring ports and labels.
    pub fn adjacency(&self) -> BTreeMap<&VertexName, Vec<&VertexName>> {
        let mut adj: BTreeMap<&VertexName, Vec<&VertexName>> =
            self.vertices.iter().map(|v| (v, Vec::new())).collect();
        for e in &self.edges {
            let [a, b] = e.ends();
            if a.vertex != b.vertex {
                adj.get_mut(&a.vertex).unwrap().push(&b.vertex);
                adj.get_mut(&b.vertex).unwrap().push(&a.vertex);
            }
        }
        adj
    }

    /// Breadth-first distances from `source` to every reachable vertex.
    pub fn distances_from(&self, source: &VertexName) -> BTreeMap<VertexName, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        if !self.vertices.contains(source) {
            return dist;
        }
        dist.insert(source.clone(), 0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in &adj[u] {
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices.iter().next() {
            None => true,
            Some(v) => self.distances_from(v).len() == self.vertices.len(),
        }
    }

    /// Vertex sets of the connected components, in order of their least
    /// vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexName>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(v) {
                continue;
            }
            let comp: BTreeSet<VertexName> = self.distances_from(v).into_keys().collect();
            seen.extend(comp.iter().cloned());
            out.push(comp);
        }
        out
    }

    fn same_signature(&self, other: &Graph) -> Result<(), GraphError> {
        if Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature {
            Ok(())
        } else {
            Err(GraphError::SignatureMismatch)
        }
    }

    /// The first reason why `self` and `other` have no common upper bound.
    pub fn conflict_with(&self, other: &Graph) -> Result<Option<Conflict>, GraphError> {
        let occ = self.occupancy();
        find_conflict(self, |end| occ.get(end).copied(), other)
    }

    /// Whether the union of the two graphs is a graph: edges stay
    /// non-intersecting and labels agree where both are defined.
    pub fn consistent(&self, other: &Graph) -> Result<bool, GraphError> {
        Ok(self.conflict_with(other)?.is_none())
    }

    /// Componentwise union; the least upper bound in the subgraph order.
    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        if let Some(c) = self.conflict_with(other)? {
            return Err(GraphError::Inconsistent(Box::new(c)));
        }
        Ok(self.union_unchecked(other))
    }

    pub(crate) fn union_unchecked(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        g.absorb(other);
        debug_assert!(g.validate().is_ok());
        g
    }

    /// In-place [`Graph::union_unchecked`]: the caller has ruled out
    /// conflicts.
    pub(crate) fn absorb(&mut self, other: &Graph) {
        self.vertices.extend(other.vertices.iter().cloned());
        self.edges.extend(other.edges.iter().cloned());
        for (v, l) in &other.vlabels {
            self.vlabels.entry(v.clone()).or_insert_with(|| l.clone());
        }
        for (e, l) in &other.elabels {
            self.elabels.entry(e.clone()).or_insert_with(|| l.clone());
        }
    }

    /// Union of many graphs; the empty graph over `signature` when the
    /// iterator is empty.
    pub fn union_all<'a>(
        signature: &Arc<Signature>,
        graphs: impl IntoIterator<Item = &'a Graph>,
    ) -> Result<Graph, GraphError> {
        let mut acc = UnionBuilder::new(signature.clone());
        for g in graphs {
            if let Some(c) = acc.conflict(g)? {
                return Err(GraphError::Inconsistent(Box::new(c)));
            }
            acc.absorb(g);
        }
        Ok(acc.finish())
    }

    /// Componentwise intersection (labels intersect as relations); the
    /// greatest lower bound in the subgraph order.
    ///
    /// Both graphs are expected to share a signature; the result carries
    /// `self`'s.
    pub fn intersection(&self, other: &Graph) -> Graph {
        debug_assert!(self.same_signature(other).is_ok());
        let vertices = self
            .vertices
            .intersection(&other.vertices)
            .cloned()
            .collect();
        let edges = self.edges.intersection(&other.edges).cloned().collect();
        let vlabels = self
            .vlabels
            .iter()
            .filter(|(v, l)| other.vlabels.get(*v) == Some(*l))
            .map(|(v, l)| (v.clone(), l.clone()))
            .collect();
        let elabels = self
            .elabels
            .iter()
            .filter(|(e, l)| other.elabels.get(*e) == Some(*l))
            .map(|(e, l)| (e.clone(), l.clone()))
            .collect();
        Graph::assemble(self.signature.clone(), vertices, edges, vlabels, elabels)
    }

    /// `self ⊆ other` in the subgraph order. Graphs over different
    /// signatures are never comparable.
    pub fn is_subgraph(&self, other: &Graph) -> bool {
        self.same_signature(other).is_ok()
            && self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self
                .vlabels
                .iter()
                .all(|(v, l)| other.vlabels.get(v) == Some(l))
            && self
                .elabels
                .iter()
                .all(|(e, l)| other.elabels.get(e) == Some(l))
    }

    /// Same graph over another signature (which must admit its ports and
    /// labels).
    pub fn with_signature(&self, signature: Arc<Signature>) -> Result<Graph, GraphError> {
        let g = Graph {
            signature,
            ..self.clone()
        };
        g.validate()?;
        Ok(g)
    }

    /// The restriction of `self` to a vertex set: those vertices, the edges
    /// between them, and the labels on what remains.
    pub fn induced(&self, keep: &BTreeSet<VertexName>) -> Graph {
        let vertices: BTreeSet<VertexName> = self.vertices.intersection(keep).cloned().collect();
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .filter(|e| e.ends().iter().all(|end| vertices.contains(&end.vertex)))
            .cloned()
            .collect();
        let vlabels = self
            .vlabels
            .iter()
            .filter(|(v, _)| vertices.contains(*v))
            .map(|(v, l)| (v.clone(), l.clone()))
            .collect();
        let elabels = self
            .elabels
            .iter()
            .filter(|(e, _)| edges.contains(*e))
            .map(|(e, l)| (e.clone(), l.clone()))
            .collect();
        Graph::assemble(self.signature.clone(), vertices, edges, vlabels, elabels)
    }

    /// Decompose into the four components.
    pub fn into_parts(self) -> GraphParts {
        (
            self.signature,
            self.vertices,
            self.edges,
            self.vlabels,
            self.elabels,
        )
    }
}

/// Conflict between `left` and `right`, given the edge occupying each
/// endpoint of `left`.
fn find_conflict<'a>(
    left: &'a Graph,
    occupant: impl Fn(&Endpoint) -> Option<&'a Edge>,
    right: &Graph,
) -> Result<Option<Conflict>, GraphError> {
    left.same_signature(right)?;
    for e in right.edges.difference(&left.edges) {
        for end in e.ends() {
            if let Some(prev) = occupant(end) {
                return Ok(Some(Conflict::PortClash {
                    endpoint: end.clone(),
                    left: prev.clone(),
                    right: e.clone(),
                }));
            }
        }
    }
    for (v, l) in &right.vlabels {
        if let Some(l0) = left.vlabels.get(v) {
            if l0 != l {
                return Ok(Some(Conflict::VertexLabel {
                    vertex: v.clone(),
                    left: l0.clone(),
                    right: l.clone(),
                }));
            }
        }
    }
    for (e, l) in &right.elabels {
        if let Some(l0) = left.elabels.get(e) {
            if l0 != l {
                return Ok(Some(Conflict::EdgeLabel {
                    edge: e.clone(),
                    left: l0.clone(),
                    right: l.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Accumulates a union of many graphs, keeping the port occupancy of the
/// partial union so that each step costs the size of the added graph.
pub(crate) struct UnionBuilder {
    graph: Graph,
    occupied: BTreeMap<Endpoint, Edge>,
}

impl UnionBuilder {
    pub(crate) fn new(signature: Arc<Signature>) -> Self {
        UnionBuilder {
            graph: Graph::empty(signature),
            occupied: BTreeMap::new(),
        }
    }

    pub(crate) fn conflict(&self, other: &Graph) -> Result<Option<Conflict>, GraphError> {
        find_conflict(&self.graph, |end| self.occupied.get(end), other)
    }

    /// Adds `other`, which must not conflict with the union so far.
    pub(crate) fn absorb(&mut self, other: &Graph) {
        for e in &other.edges {
            for end in e.ends() {
                self.occupied
                    .entry(end.clone())
                    .or_insert_with(|| e.clone());
            }
        }
        self.graph.absorb(other);
    }

    pub(crate) fn finish(self) -> Graph {
        debug_assert!(self.graph.validate().is_ok());
        self.graph
    }
}

/// Incremental construction of a [`Graph`]; endpoints of edges are added
/// as vertices automatically.
pub struct GraphBuilder {
    graph: Graph,
    pending_edges: Vec<(Endpoint, Endpoint, Option<Label>)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, v: impl Into<VertexName>) -> Self {
        self.graph.vertices.insert(v.into());
        self
    }

    pub fn labeled(mut self, v: impl Into<VertexName>, label: impl Into<Label>) -> Self {
        let v = v.into();
        self.graph.vertices.insert(v.clone());
        self.graph.vlabels.insert(v, label.into());
        self
    }

    pub fn edge<V: Into<VertexName>, P: Into<Port>>(mut self, a: (V, P), b: (V, P)) -> Self {
        self.pending_edges
            .push((Endpoint::new(a.0, a.1), Endpoint::new(b.0, b.1), None));
        self
    }

    pub fn labeled_edge<V: Into<VertexName>, P: Into<Port>>(
        mut self,
        a: (V, P),
        b: (V, P),
        label: impl Into<Label>,
    ) -> Self {
        self.pending_edges.push((
            Endpoint::new(a.0, a.1),
            Endpoint::new(b.0, b.1),
            Some(label.into()),
        ));
        self
    }

    pub fn build(mut self) -> Result<Graph, GraphError> {
        for (a, b, label) in self.pending_edges {
            self.graph.vertices.insert(a.vertex.clone());
            self.graph.vertices.insert(b.vertex.clone());
            let e = Edge::new(a, b)?;
            if let Some(l) = label {
                self.graph.elabels.insert(e.clone(), l);
            }
            self.graph.edges.insert(e);
        }
        self.graph.validate()?;
        Ok(self.graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x", ">", "<"], &["y"], &["l", "r"]).unwrap())
    }

    fn vertex(name: &str, label: Option<&str>) -> Graph {
        let b = Graph::builder(&sig());
        match label {
            Some(l) => b.labeled(name, l),
            None => b.vertex(name),
        }
        .build()
        .unwrap()
    }

    #[test]
    fn empty_is_consistent_with_everything() {
        let g = Graph::builder(&sig())
            .labeled("a", "x")
            .edge(("a", "l"), ("b", "r"))
            .build()
            .unwrap();
        let e = Graph::empty(sig());
        assert!(g.consistent(&e).unwrap());
        assert_eq!(g.union(&e).unwrap(), g);
        assert_eq!(g.intersection(&e), e);
        assert!(e.is_subgraph(&g));
    }

    #[test]
    fn label_clash_is_inconsistent() {
        let a = vertex("a", Some(">"));
        let b = vertex("a", Some("<"));
        assert!(!a.consistent(&b).unwrap());
        match a.union(&b) {
            Err(GraphError::Inconsistent(c)) => {
                assert!(matches!(*c, Conflict::VertexLabel { .. }))
            }
            other => panic!("expected a label conflict, got {other:?}"),
        }
    }

    #[test]
    fn port_reuse_is_inconsistent() {
        let s = sig();
        let g = Graph::builder(&s)
            .edge(("a", "l"), ("b", "r"))
            .build()
            .unwrap();
        let h = Graph::builder(&s)
            .edge(("a", "l"), ("c", "r"))
            .build()
            .unwrap();
        match g.conflict_with(&h).unwrap() {
            Some(Conflict::PortClash { endpoint, .. }) => {
                assert_eq!(endpoint, Endpoint::new("a", "l"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn path_union() {
        let s = sig();
        let ab = Graph::builder(&s)
            .edge(("a", "r"), ("b", "l"))
            .build()
            .unwrap();
        let bc = Graph::builder(&s)
            .edge(("b", "r"), ("c", "l"))
            .build()
            .unwrap();
        let abc = Graph::builder(&s)
            .edge(("a", "r"), ("b", "l"))
            .edge(("b", "r"), ("c", "l"))
            .build()
            .unwrap();
        assert_eq!(ab.union(&bc).unwrap(), abc);
    }

    #[test]
    fn intersection_of_labels_is_relational() {
        let labeled = vertex("a", Some("x"));
        let bare = vertex("a", None);
        assert_eq!(labeled.intersection(&bare), bare);
        assert_eq!(labeled.intersection(&labeled), labeled);
    }

    #[test]
    fn subgraph_order_on_labels() {
        let labeled = vertex("a", Some("x"));
        let bare = vertex("a", None);
        assert!(bare.is_subgraph(&labeled));
        assert!(!labeled.is_subgraph(&bare));
    }

    #[test]
    fn invariants_rejected() {
        let s = sig();
        assert!(matches!(
            Graph::builder(&s)
                .edge(("a", "l"), ("b", "r"))
                .edge(("a", "l"), ("c", "r"))
                .build(),
            Err(GraphError::PortClash { .. })
        ));
        assert!(matches!(
            Graph::builder(&s).edge(("a", "l"), ("a", "l")).build(),
            Err(GraphError::DegenerateEdge(_))
        ));
        assert!(matches!(
            Graph::builder(&s).edge(("a", "q"), ("b", "l")).build(),
            Err(GraphError::UnknownPort(_))
        ));
        assert!(matches!(
            Graph::builder(&s).labeled("a", "zz").build(),
            Err(GraphError::UnknownVertexLabel(_))
        ));
        // self-loop over two distinct ports is fine
        let g = Graph::builder(&s)
            .edge(("a", "l"), ("a", "r"))
            .build()
            .unwrap();
        assert_eq!(g.degree(&"a".into()), 2);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let other = Arc::new(Signature::new(&["x"], &[], &["p"]).unwrap());
        let a = Graph::empty(sig());
        let b = Graph::empty(other);
        assert_eq!(a.consistent(&b), Err(GraphError::SignatureMismatch));
        assert!(!a.is_subgraph(&b));
    }
}
