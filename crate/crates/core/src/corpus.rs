//! Seeded random graphs for property checks.
//!
//! Graphs are Erdős–Rényi-like over port slots: each vertex gets a label
//! with probability `label_density`, then a random matching of the port
//! slots is drawn, keeping each pair with probability `edge_density`.
//! Pairing slots one by one means the port constraint holds by
//! construction. Samples above the atom budget are rejected, which keeps
//! sub-disk enumeration tractable.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Endpoint, Graph, Label, Renaming, Signature, VertexName};
use crate::monotonizer::Encoding;

/// Shape of a random corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub label_density: f64,
    pub edge_density: f64,
    /// Largest accepted [`atom_count`] of a connected component.
    pub atom_budget: usize,
}

impl CorpusSpec {
    pub fn new(max_vertices: usize) -> Self {
        CorpusSpec {
            min_vertices: 1,
            max_vertices,
            label_density: 0.5,
            edge_density: 0.5,
            atom_budget: usize::MAX,
        }
    }

    pub fn with_atom_budget(mut self, budget: usize) -> Self {
        self.atom_budget = budget;
        self
    }

    pub fn with_edge_density(mut self, d: f64) -> Self {
        self.edge_density = d;
        self
    }
}

/// The RNG used for every corpus, so that seeds are portable.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertex base names `a`, `b`, ..., `z`, `a1`, ...
pub fn vertex_name(k: usize) -> VertexName {
    let letter = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        VertexName::new(&letter.to_string())
    } else {
        VertexName::new(&format!("{letter}{}", k / 26))
    }
}

/// Vertices, edges and labels: the number of elementary pieces a subgraph
/// can keep or drop.
pub fn atom_count(g: &Graph) -> usize {
    g.vertex_count() + g.edges().len() + g.vertex_labels().len() + g.edge_labels().len()
}

/// Largest [`atom_count`] over connected components.
pub fn component_atoms(g: &Graph) -> usize {
    g.components()
        .iter()
        .map(|c| atom_count(&g.induced(c)))
        .max()
        .unwrap_or(0)
}

fn pick_label(rng: &mut impl Rng, labels: &BTreeSet<Label>, density: f64) -> Option<Label> {
    if labels.is_empty() || !rng.gen_bool(density) {
        return None;
    }
    labels.iter().choose(rng).cloned()
}

/// One random graph, without the atom budget.
pub fn random_graph(sig: &Arc<Signature>, spec: &CorpusSpec, rng: &mut impl Rng) -> Graph {
    let n = rng.gen_range(spec.min_vertices..=spec.max_vertices);
    let names: Vec<VertexName> = (0..n).map(vertex_name).collect();
    let mut vlabels = BTreeMap::new();
    for v in &names {
        if let Some(l) = pick_label(rng, sig.sigma(), spec.label_density) {
            vlabels.insert(v.clone(), l);
        }
    }
    let mut slots: Vec<Endpoint> = names
        .iter()
        .flat_map(|v| {
            sig.pi()
                .iter()
                .map(move |p| Endpoint::new(v.clone(), p.clone()))
        })
        .collect();
    slots.shuffle(rng);
    let mut edges = BTreeSet::new();
    let mut elabels = BTreeMap::new();
    for pair in slots.chunks_exact(2) {
        if rng.gen_bool(spec.edge_density) {
            let e = Edge::new(pair[0].clone(), pair[1].clone()).expect("distinct slots");
            if let Some(l) = pick_label(rng, sig.delta(), spec.label_density) {
                elabels.insert(e.clone(), l);
            }
            edges.insert(e);
        }
    }
    Graph::from_parts(
        sig.clone(),
        names.into_iter().collect(),
        edges,
        vlabels,
        elabels,
    )
    .expect("slot matching respects ports")
}

/// `count` random graphs from `seed`, rejecting those over the atom budget.
pub fn corpus(sig: &Arc<Signature>, spec: &CorpusSpec, seed: u64, count: usize) -> Vec<Graph> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_graph(sig, spec, &mut rng);
        if component_atoms(&g) <= spec.atom_budget {
            out.push(g);
        }
    }
    out
}

/// A corpus over an extended signature mixing encodings of base graphs
/// (total graphs) with arbitrary extended graphs (mostly partial or
/// incoherent), alternating.
pub fn encoded_corpus(enc: &Encoding, spec: &CorpusSpec, seed: u64, count: usize) -> Vec<Graph> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = if out.len() % 2 == 0 {
            enc.encode_graph(&random_graph(enc.base(), spec, &mut rng))
        } else {
            random_graph(enc.extended(), spec, &mut rng)
        };
        if component_atoms(&g) <= spec.atom_budget {
            out.push(g);
        }
    }
    out
}

/// A random renaming permuting the bases of `g` among themselves and
/// `fresh` extra names.
pub fn random_renaming(g: &Graph, fresh: usize, rng: &mut impl Rng) -> Renaming {
    let bases: Vec<String> = g
        .vertices()
        .iter()
        .map(|v| v.base().to_owned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut targets = bases.clone();
    targets.extend(
        (0..)
            .map(|k| format!("r{k}"))
            .filter(|name| !bases.contains(name))
            .take(fresh),
    );
    targets.shuffle(rng);
    Renaming::from_injection(
        bases
            .iter()
            .map(String::as_str)
            .zip(targets.iter().map(String::as_str)),
    )
    .expect("injection on bases")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x", "y"], &["e"], &["l", "r"]).unwrap())
    }

    #[test]
    fn deterministic_and_valid() {
        let spec = CorpusSpec::new(6);
        let a = corpus(&sig(), &spec, 7, 30);
        assert_eq!(a, corpus(&sig(), &spec, 7, 30));
        assert_ne!(a, corpus(&sig(), &spec, 8, 30));
        for g in &a {
            g.validate().unwrap();
            assert!((1..=6).contains(&g.vertex_count()));
        }
    }

    #[test]
    fn budget_is_respected() {
        let spec = CorpusSpec::new(8).with_atom_budget(6);
        for g in corpus(&sig(), &spec, 1, 40) {
            assert!(component_atoms(&g) <= 6);
        }
    }

    #[test]
    fn names() {
        assert_eq!(vertex_name(0).to_string(), "a");
        assert_eq!(vertex_name(27).to_string(), "b1");
    }
}
