//! Monotonic simulation of an arbitrary causal graph dynamics.
//!
//! The encoding ω doubles every port `p` into `p` (flag 0, the original
//! port) and `p'` (flag 1, reserved for loopbacks), and adds a label `*`.
//! `ω(G)` labels every unlabeled vertex and edge with `*` and closes every
//! free port `u:p` with a `*`-labeled loopback `{u:p, u:p'}`. Inclusions
//! between originals become incomparabilities between encodings, and the
//! rule [`MonotonizedRule`] of radius `3r + 2` computes a monotonic `F'`
//! with `F' ∘ ω = ω ∘ F`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::disk::{
    bounded_distances, disk_graph, extract_disk, is_disk_of_radius, restrict, PointedGraph,
};
use crate::dynamics::{Dynamics, DynamicsError};
use crate::graph::{
    Conflict, Edge, Endpoint, Graph, GraphError, Label, Port, Signature, VertexName,
};
use crate::rule::{check_input, eval_via_canonical, LocalRule, Memo, RuleError, RuleTable};

/// The extra label marking a missing label.
pub const STAR: &str = "*";

/// Suffix of the loopback copy of a port.
pub const PRIME: char = '\'';

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MonoError {
    #[error("signature cannot be extended: {0}")]
    BadSignature(String),
    #[error("graph is not an encoding: {0}")]
    NotInImage(Defect),
    #[error("input is not a disk of radius {0}")]
    WrongRadius(usize),
    #[error("base rule outputs are inconsistent: {0}")]
    Inconsistent(Conflict),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<MonoError> for RuleError {
    fn from(e: MonoError) -> Self {
        match e {
            MonoError::Rule(r) => r,
            MonoError::Graph(g) => RuleError::Graph(g),
            MonoError::Inconsistent(c) => RuleError::Graph(GraphError::Inconsistent(Box::new(c))),
            other => RuleError::Graph(GraphError::BadName(other.to_string())),
        }
    }
}

/// First reason a graph over the extended signature is not `ω` of anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    UnlabeledVertex(VertexName),
    UnlabeledEdge(Edge),
    FreePort(Endpoint),
    IncoherentEdge(Edge),
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::UnlabeledVertex(v) => write!(f, "vertex {v} has no label"),
            Defect::UnlabeledEdge(e) => write!(f, "edge {e} has no label"),
            Defect::FreePort(p) => write!(f, "original port {p} is free"),
            Defect::IncoherentEdge(e) => write!(f, "edge {e} misuses a loopback port"),
        }
    }
}

/// `p'`, the loopback copy of `p`.
pub fn primed(p: &Port) -> Port {
    Port::new(&format!("{}{PRIME}", p.as_str()))
}

/// Split an extended port into its original port and flag.
pub fn split_port(p: &Port) -> (Port, bool) {
    match p.as_str().strip_suffix(PRIME) {
        Some(base) => (Port::new(base), true),
        None => (p.clone(), false),
    }
}

/// The extended signature: `Σ ⊎ {*}`, `Δ ⊎ {*}`, and `π × {0, 1}` written
/// as `p` and `p'`.
pub fn extend_signature(sig: &Signature) -> Result<Arc<Signature>, MonoError> {
    let star = Label::new(STAR);
    if sig.sigma().contains(&star) || sig.delta().contains(&star) {
        return Err(MonoError::BadSignature(format!("label {STAR} is reserved")));
    }
    if let Some(p) = sig.pi().iter().find(|p| p.as_str().ends_with(PRIME)) {
        return Err(MonoError::BadSignature(format!(
            "port {p} ends with {PRIME}"
        )));
    }
    let mut sigma = sig.sigma().clone();
    sigma.insert(star.clone());
    let mut delta = sig.delta().clone();
    delta.insert(star);
    let pi: BTreeSet<Port> = sig
        .pi()
        .iter()
        .flat_map(|p| [p.clone(), primed(p)])
        .collect();
    Ok(Arc::new(Signature::from_sets(sigma, delta, pi)?))
}

/// Base and extended signatures with the encoding between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    base: Arc<Signature>,
    extended: Arc<Signature>,
    star: Label,
}

impl Encoding {
    pub fn new(base: Arc<Signature>) -> Result<Self, MonoError> {
        let extended = extend_signature(&base)?;
        Ok(Encoding {
            base,
            extended,
            star: Label::new(STAR),
        })
    }

    pub fn base(&self) -> &Arc<Signature> {
        &self.base
    }

    pub fn extended(&self) -> &Arc<Signature> {
        &self.extended
    }

    fn loopback(&self, v: &VertexName, p: &Port) -> Edge {
        Edge::new(
            Endpoint::new(v.clone(), p.clone()),
            Endpoint::new(v.clone(), primed(p)),
        )
        .expect("p and p' differ")
    }

    /// `ω(G)`.
    pub fn encode_graph(&self, g: &Graph) -> Graph {
        let (_, vertices, mut edges, mut vlabels, mut elabels) = g.clone().into_parts();
        for v in &vertices {
            vlabels
                .entry(v.clone())
                .or_insert_with(|| self.star.clone());
        }
        for e in &edges {
            elabels
                .entry(e.clone())
                .or_insert_with(|| self.star.clone());
        }
        let occupied: BTreeSet<Endpoint> = g.occupancy().into_keys().cloned().collect();
        for v in &vertices {
            for p in self.base.pi() {
                if !occupied.contains(&Endpoint::new(v.clone(), p.clone())) {
                    let lb = self.loopback(v, p);
                    elabels.insert(lb.clone(), self.star.clone());
                    edges.insert(lb);
                }
            }
        }
        Graph::assemble(self.extended.clone(), vertices, edges, vlabels, elabels)
    }

    /// The inverse of ω on its image.
    pub fn decode_graph(&self, g: &Graph) -> Result<Graph, MonoError> {
        if let Some(v) = g.vertices().iter().find(|v| g.vertex_label(v).is_none()) {
            return Err(MonoError::NotInImage(Defect::UnlabeledVertex(v.clone())));
        }
        if let Some(e) = g.edges().iter().find(|e| g.edge_label(e).is_none()) {
            return Err(MonoError::NotInImage(Defect::UnlabeledEdge(e.clone())));
        }
        if let Some(e) = g.edges().iter().find(|e| !self.is_coherent_edge(g, e)) {
            return Err(MonoError::NotInImage(Defect::IncoherentEdge(e.clone())));
        }
        let occupied = g.occupancy();
        for v in g.vertices() {
            for p in self.base.pi() {
                let end = Endpoint::new(v.clone(), p.clone());
                if !occupied.contains_key(&end) {
                    return Err(MonoError::NotInImage(Defect::FreePort(end)));
                }
            }
        }
        Ok(self.strip(g))
    }

    /// Drop loopbacks and `*` labels, without checking totality.
    fn strip(&self, g: &Graph) -> Graph {
        let vertices = g.vertices().clone();
        let edges: BTreeSet<Edge> = g
            .edges()
            .iter()
            .filter(|e| e.ends().iter().all(|end| !split_port(&end.port).1))
            .cloned()
            .collect();
        let vlabels: BTreeMap<VertexName, Label> = g
            .vertex_labels()
            .iter()
            .filter(|(_, l)| **l != self.star)
            .map(|(v, l)| (v.clone(), l.clone()))
            .collect();
        let elabels: BTreeMap<Edge, Label> = g
            .edge_labels()
            .iter()
            .filter(|(e, l)| **l != self.star && edges.contains(*e))
            .map(|(e, l)| (e.clone(), l.clone()))
            .collect();
        Graph::assemble(self.base.clone(), vertices, edges, vlabels, elabels)
    }

    /// An edge `{u:p, v:q}` is coherent when one end is an original port
    /// and, if the other is a loopback port, it is the `*`-labeled loopback
    /// of that same original port.
    fn is_coherent_edge(&self, g: &Graph, e: &Edge) -> bool {
        let [a, b] = e.ends();
        let (pa, fa) = split_port(&a.port);
        let (pb, fb) = split_port(&b.port);
        match (fa, fb) {
            (false, false) => true,
            (true, true) => false,
            (false, true) => {
                a.vertex == b.vertex && pa == pb && g.edge_label(e) == Some(&self.star)
            }
            (true, false) => {
                a.vertex == b.vertex && pa == pb && g.edge_label(e) == Some(&self.star)
            }
        }
    }

    /// The largest coherent subgraph: incoherent edges removed.
    pub fn coh(&self, g: &Graph) -> Graph {
        if g.edges().iter().all(|e| self.is_coherent_edge(g, e)) {
            return g.clone();
        }
        let (sig, vertices, edges, vlabels, elabels) = g.clone().into_parts();
        let keep: BTreeSet<Edge> = edges
            .iter()
            .filter(|e| self.is_coherent_edge(g, e))
            .cloned()
            .collect();
        let elabels = elabels
            .into_iter()
            .filter(|(e, _)| keep.contains(e))
            .collect();
        Graph::assemble(sig, vertices, keep, vlabels, elabels)
    }

    /// `ω_r(D) = ω(H)^r_c` for a radius-`r` disk `D = (H, c)`.
    pub fn encode_disk(&self, d: &PointedGraph, r: usize) -> Result<PointedGraph, MonoError> {
        if !is_disk_of_radius(d, r) {
            return Err(MonoError::WrongRadius(r));
        }
        Ok(extract_disk(&self.encode_graph(&d.graph), &d.center, r).expect("center is kept"))
    }

    /// The radius-`r` disk `D` with `ω_r(D) = d`, if there is one.
    pub fn decode_disk(&self, d: &PointedGraph, r: usize) -> Option<PointedGraph> {
        let candidate = PointedGraph {
            graph: self.strip(&d.graph),
            center: d.center.clone(),
        };
        if !is_disk_of_radius(&candidate, r) {
            return None;
        }
        let back = self.encode_disk(&candidate, r).ok()?;
        (back == *d).then_some(candidate)
    }

    /// Cheap necessary condition for `(g, c)` being in the image of `ω_r`:
    /// everything within distance `r` of `c` is labeled and has its
    /// original ports occupied, and every edge is labeled.
    fn looks_total(&self, g: &Graph, c: &VertexName, r: usize) -> bool {
        if g.edges().len() != g.edge_labels().len() {
            return false;
        }
        let occupied = g.occupancy();
        bounded_distances(g, c, r).keys().all(|v| {
            g.vertex_label(v).is_some()
                && self
                    .base
                    .pi()
                    .iter()
                    .all(|p| occupied.contains_key(&Endpoint::new(v.clone(), p.clone())))
        })
    }
}

/// The monotonic rule `f'` of radius `3r + 2` simulating a base rule of
/// radius `r` through the encoding. Results are memoized by canonical disk.
pub struct MonotonizedRule {
    base: Arc<dyn LocalRule>,
    table: Option<Arc<RuleTable>>,
    encoding: Encoding,
    memo: Memo,
}

impl fmt::Debug for MonotonizedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MonotonizedRule(base radius {}, radius {})",
            self.base.radius(),
            self.radius()
        )
    }
}

/// Radius of the monotonized rule for a base rule of radius `r`.
pub fn monotonized_radius(r: usize) -> usize {
    3 * r + 2
}

impl MonotonizedRule {
    pub fn new(base: Arc<dyn LocalRule>) -> Result<Self, MonoError> {
        let encoding = Encoding::new(base.signature().clone())?;
        Ok(MonotonizedRule {
            base,
            table: None,
            encoding,
            memo: Memo::new(),
        })
    }

    /// Like [`MonotonizedRule::new`], remembering the table so that the
    /// rule can be written back out.
    pub fn from_table(table: Arc<RuleTable>) -> Result<Self, MonoError> {
        let mut rule = MonotonizedRule::new(table.clone())?;
        rule.table = Some(table);
        Ok(rule)
    }

    pub fn base_table(&self) -> Option<&Arc<RuleTable>> {
        self.table.as_ref()
    }

    pub fn base(&self) -> &Arc<dyn LocalRule> {
        &self.base
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    fn base_radius(&self) -> usize {
        self.base.radius()
    }

    /// Whether `coh(h)` centered at `c` is the encoding of a radius-`r'`
    /// disk.
    fn coherent_total(&self, coherent: &Graph, c: &VertexName) -> bool {
        let r1 = self.radius();
        self.encoding.looks_total(coherent, c, r1)
            && self
                .encoding
                .decode_disk(
                    &PointedGraph {
                        graph: coherent.clone(),
                        center: c.clone(),
                    },
                    r1,
                )
                .is_some()
    }

    /// `coh(h)^{r'}_c`: the coherent part seen from `c`. Vertices that only
    /// incoherent edges attached to `c`'s disk are dropped; keeping them
    /// would make every disk with such a vertex fail the totality test while
    /// its sub-disk without the vertex passes, breaking monotonicity.
    pub fn coherent_disk(&self, h: &Graph, c: &VertexName) -> Graph {
        disk_graph(&self.encoding.coh(h), c, self.radius())
    }

    /// `φ` at `v` for a disk `(h, c)`: empty unless `coh(h)` is total, and
    /// otherwise the base rule on the decoded radius-`r` disk at `v`.
    pub fn phi(&self, h: &Graph, c: &VertexName, v: &VertexName) -> Result<Graph, MonoError> {
        let coherent = self.coherent_disk(h, c);
        if !self.coherent_total(&coherent, c) {
            return Ok(Graph::empty(self.base.signature().clone()));
        }
        self.phi_total(&coherent, v)
    }

    fn phi_total(&self, coherent: &Graph, v: &VertexName) -> Result<Graph, MonoError> {
        let r = self.base_radius();
        let local = PointedGraph {
            graph: disk_graph(coherent, v, r),
            center: v.clone(),
        };
        let decoded = self
            .encoding
            .decode_disk(&local, r)
            .ok_or(MonoError::NotInImage(Defect::UnlabeledVertex(v.clone())))?;
        Ok(self.base.eval(&decoded)?)
    }

    /// `f'` on a disk whose coherent part has already been computed.
    fn compute(&self, coherent: &Graph, c: &VertexName) -> Result<Graph, MonoError> {
        let empty = Graph::empty(self.encoding.extended.clone());
        if !self.coherent_total(coherent, c) {
            return Ok(empty);
        }
        let r = self.base_radius();
        let own = self.phi_total(coherent, c)?;
        if own.is_empty() {
            return Ok(empty);
        }
        // every vertex of the radius-(2r+1) disk, i.e. up to distance 2r+2
        let sweep = bounded_distances(coherent, c, 2 * r + 2);
        let mut union = Graph::empty(self.base.signature().clone());
        for v in sweep.keys() {
            let out = self.phi_total(coherent, v)?;
            if let Some(conflict) = union.conflict_with(&out)? {
                return Err(MonoError::Inconsistent(conflict));
            }
            union = union.union_unchecked(&out);
        }
        let encoded = self.encoding.encode_graph(&union);
        Ok(restrict(&encoded, 0, own.vertices()).expect("φ(c) ⊆ union"))
    }
}

impl LocalRule for MonotonizedRule {
    fn radius(&self) -> usize {
        monotonized_radius(self.base.radius())
    }

    fn signature(&self) -> &Arc<Signature> {
        &self.encoding.extended
    }

    fn eval(&self, disk: &PointedGraph) -> Result<Graph, RuleError> {
        check_input(self, disk)?;
        let coherent = self.coherent_disk(&disk.graph, &disk.center);
        if !self
            .encoding
            .looks_total(&coherent, &disk.center, self.radius())
        {
            return Ok(Graph::empty(self.encoding.extended.clone()));
        }
        let key = PointedGraph {
            graph: coherent,
            center: disk.center.clone(),
        };
        eval_via_canonical(&key, |canon| {
            if let Some(out) = self.memo.get(canon) {
                return Ok(out);
            }
            let out = self.compute(&canon.disk().graph, &canon.disk().center)?;
            self.memo.insert(canon.clone(), out.clone());
            Ok(out)
        })
    }
}

/// `F'(ω(G))` together with `ω(F(G))`, for checking the simulation law.
pub struct Simulation {
    pub simulated: Graph,
    pub expected: Graph,
}

impl Simulation {
    pub fn holds(&self) -> bool {
        self.simulated == self.expected
    }
}

/// Run one step of the monotonic simulation on `ω(G)` and of the base
/// dynamics on `G`.
pub fn simulate(
    base: &Dynamics,
    monotonized: &Dynamics,
    g: &Graph,
) -> Result<Simulation, MonoError> {
    let rule = MonotonizedRule::new(base.rule().clone())?;
    let encoded = rule.encoding().encode_graph(g);
    let simulated = monotonized.apply_cgd(&encoded)?;
    let expected = rule.encoding().encode_graph(&base.apply_cgd(g)?);
    Ok(Simulation {
        simulated,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc() -> Encoding {
        Encoding::new(Arc::new(
            Signature::new(&[">", "<"], &[], &["l", "r"]).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn single_vertex_encoding() {
        let e = enc();
        let g = Graph::builder(e.base()).vertex("a").build().unwrap();
        let want = Graph::builder(e.extended())
            .labeled("a", STAR)
            .labeled_edge(("a", "l"), ("a", "l'"), STAR)
            .labeled_edge(("a", "r"), ("a", "r'"), STAR)
            .build()
            .unwrap();
        assert_eq!(e.encode_graph(&g), want);
        assert_eq!(e.decode_graph(&want).unwrap(), g);
        assert!(e.encode_graph(&Graph::empty(e.base().clone())).is_empty());
    }

    #[test]
    fn coh_drops_loopback_port_misuse() {
        let e = enc();
        let g = Graph::builder(e.extended())
            .labeled("a", STAR)
            .labeled_edge(("a", "l"), ("a", "l'"), STAR)
            .edge(("a", "r'"), ("b", "l'"))
            .edge(("a", "r"), ("b", "r'"))
            .build()
            .unwrap();
        let want = Graph::builder(e.extended())
            .labeled("a", STAR)
            .vertex("b")
            .labeled_edge(("a", "l"), ("a", "l'"), STAR)
            .build()
            .unwrap();
        assert_eq!(e.coh(&g), want);
        assert_eq!(e.coh(&want), want);
    }

    #[test]
    fn unstarred_loopback_is_incoherent() {
        let e = enc();
        let g = Graph::builder(e.extended())
            .edge(("a", "l"), ("a", "l'"))
            .build()
            .unwrap();
        assert!(e.coh(&g).edges().is_empty());
    }

    #[test]
    fn decode_reports_defects() {
        let e = enc();
        let g = Graph::builder(e.extended())
            .labeled("a", STAR)
            .labeled_edge(("a", "l"), ("a", "l'"), STAR)
            .build()
            .unwrap();
        assert_eq!(
            e.decode_graph(&g),
            Err(MonoError::NotInImage(Defect::FreePort(Endpoint::new(
                "a", "r"
            ))))
        );
    }

    #[test]
    fn reserved_symbols_rejected() {
        let s = Signature::new(&["*"], &[], &["p"]).unwrap();
        assert!(extend_signature(&s).is_err());
        let s = Signature::new(&["x"], &[], &["p'"]).unwrap();
        assert!(extend_signature(&s).is_err());
    }

    #[test]
    fn disk_encoding_round_trip() {
        let e = enc();
        let g = Graph::builder(e.base())
            .labeled("b", ">")
            .edge(("a", "r"), ("b", "l"))
            .edge(("b", "r"), ("c", "l"))
            .edge(("c", "r"), ("d", "l"))
            .build()
            .unwrap();
        let d = extract_disk(&g, &"b".into(), 1).unwrap();
        let wd = e.encode_disk(&d, 1).unwrap();
        assert_eq!(
            wd,
            extract_disk(&e.encode_graph(&g), &"b".into(), 1).unwrap()
        );
        assert_eq!(e.decode_disk(&wd, 1), Some(d));
    }
}
