//! JSON reading and writing of graphs and rules.
//!
//! Output is deterministic: sets are written sorted and rule entries in
//! canonical-disk order, so files diff cleanly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disk::PointedGraph;
use crate::graph::{Edge, Endpoint, Graph, GraphError, Signature, VertexName};
use crate::library::ExampleRule;
use crate::monotonizer::{MonoError, MonotonizedRule};
use crate::rule::{LocalRule, RuleError, RuleTable};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid rule: {0}")]
    Rule(#[from] RuleError),
    #[error("invalid monotonized rule: {0}")]
    Mono(#[from] MonoError),
    #[error("vertex name {0:?} is not valid")]
    BadName(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SignatureJson {
    pub sigma: Vec<String>,
    pub delta: Vec<String>,
    pub pi: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    /// `[[vertex, port], [vertex, port]]`
    pub ends: [(String, String); 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A graph without its signature, as stored inside rule files.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct GraphBody {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub signature: SignatureJson,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiskJson {
    pub center: String,
    #[serde(flatten)]
    pub graph: GraphBody,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub disk: DiskJson,
    pub output: GraphBody,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub signature: SignatureJson,
    pub radius: usize,
    pub default_empty: bool,
    pub entries: Vec<EntryJson>,
}

/// A rule file: a table, or the monotonic simulation of a table.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleJson {
    Table(TableJson),
    Monotonized {
        /// Radius of the simulating rule, informative only.
        radius: usize,
        /// Extended signature, informative only.
        signature: SignatureJson,
        base: TableJson,
    },
}

pub fn signature_to_json(sig: &Signature) -> SignatureJson {
    SignatureJson {
        sigma: sig.sigma().iter().map(|l| l.as_str().to_owned()).collect(),
        delta: sig.delta().iter().map(|l| l.as_str().to_owned()).collect(),
        pi: sig.pi().iter().map(|p| p.as_str().to_owned()).collect(),
    }
}

pub fn signature_from_json(s: &SignatureJson) -> Result<Arc<Signature>, IoError> {
    Ok(Arc::new(Signature::new(&s.sigma, &s.delta, &s.pi)?))
}

pub fn body_to_json(g: &Graph) -> GraphBody {
    GraphBody {
        vertices: g
            .vertices()
            .iter()
            .map(|v| VertexJson {
                name: v.to_string(),
                label: g.vertex_label(v).map(|l| l.as_str().to_owned()),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| {
                let [a, b] = e.ends();
                EdgeJson {
                    ends: [
                        (a.vertex.to_string(), a.port.as_str().to_owned()),
                        (b.vertex.to_string(), b.port.as_str().to_owned()),
                    ],
                    label: g.edge_label(e).map(|l| l.as_str().to_owned()),
                }
            })
            .collect(),
    }
}

fn name(s: &str) -> Result<VertexName, IoError> {
    s.parse().map_err(|_| IoError::BadName(s.to_owned()))
}

pub fn body_from_json(sig: &Arc<Signature>, body: &GraphBody) -> Result<Graph, IoError> {
    let mut vertices = std::collections::BTreeSet::new();
    let mut vlabels = std::collections::BTreeMap::new();
    for v in &body.vertices {
        let n = name(&v.name)?;
        if let Some(l) = &v.label {
            vlabels.insert(n.clone(), l.as_str().into());
        }
        vertices.insert(n);
    }
    let mut edges = std::collections::BTreeSet::new();
    let mut elabels = std::collections::BTreeMap::new();
    for e in &body.edges {
        let [(av, ap), (bv, bp)] = &e.ends;
        let edge = Edge::new(
            Endpoint::new(name(av)?, ap.as_str()),
            Endpoint::new(name(bv)?, bp.as_str()),
        )?;
        if let Some(l) = &e.label {
            elabels.insert(edge.clone(), l.as_str().into());
        }
        edges.insert(edge);
    }
    Ok(Graph::from_parts(
        sig.clone(),
        vertices,
        edges,
        vlabels,
        elabels,
    )?)
}

pub fn graph_to_json(g: &Graph) -> GraphJson {
    let body = body_to_json(g);
    GraphJson {
        signature: signature_to_json(g.signature()),
        vertices: body.vertices,
        edges: body.edges,
    }
}

pub fn graph_from_json(j: &GraphJson) -> Result<Graph, IoError> {
    let sig = signature_from_json(&j.signature)?;
    body_from_json(
        &sig,
        &GraphBody {
            vertices: j.vertices.clone(),
            edges: j.edges.clone(),
        },
    )
}

pub fn write_graph(g: &Graph) -> String {
    serde_json::to_string_pretty(&graph_to_json(g)).expect("serializable")
}

pub fn read_graph(text: &str) -> Result<Graph, IoError> {
    graph_from_json(&serde_json::from_str(text)?)
}

pub fn table_to_json(t: &RuleTable) -> TableJson {
    TableJson {
        signature: signature_to_json(t.signature()),
        radius: t.radius(),
        default_empty: t.default_empty(),
        entries: t
            .entries()
            .into_iter()
            .map(|(k, out)| EntryJson {
                disk: DiskJson {
                    center: k.disk().center.to_string(),
                    graph: body_to_json(&k.disk().graph),
                },
                output: body_to_json(out),
            })
            .collect(),
    }
}

/// Keys need not be canonical: each is canonicalized on insertion.
pub fn table_from_json(j: &TableJson) -> Result<RuleTable, IoError> {
    let sig = signature_from_json(&j.signature)?;
    let mut t = RuleTable::new(sig.clone(), j.radius, j.default_empty);
    for e in &j.entries {
        let disk = PointedGraph {
            graph: body_from_json(&sig, &e.disk.graph)?,
            center: name(&e.disk.center)?,
        };
        t.insert(&disk, body_from_json(&sig, &e.output)?)?;
    }
    Ok(t)
}

pub fn rule_to_json(rule: &ExampleRule) -> RuleJson {
    match rule {
        ExampleRule::Table(t) => RuleJson::Table(table_to_json(t)),
        ExampleRule::Monotonized(m) => {
            let base = m
                .base_table()
                .expect("monotonized examples are built from tables");
            RuleJson::Monotonized {
                radius: m.radius(),
                signature: signature_to_json(m.signature()),
                base: table_to_json(base),
            }
        }
    }
}

pub fn rule_from_json(j: &RuleJson) -> Result<ExampleRule, IoError> {
    Ok(match j {
        RuleJson::Table(t) => ExampleRule::Table(Arc::new(table_from_json(t)?)),
        RuleJson::Monotonized { base, .. } => {
            let base = Arc::new(table_from_json(base)?);
            ExampleRule::Monotonized(Arc::new(MonotonizedRule::from_table(base)?))
        }
    })
}

pub fn write_rule(rule: &ExampleRule) -> String {
    serde_json::to_string_pretty(&rule_to_json(rule)).expect("serializable")
}

pub fn read_rule(text: &str) -> Result<ExampleRule, IoError> {
    rule_from_json(&serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{monotonic_particle_rule, one_port_rule, particle_rows};

    #[test]
    fn graph_round_trip() {
        for (g, h) in particle_rows() {
            assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
            assert_eq!(
                write_graph(&h),
                write_graph(&read_graph(&write_graph(&h)).unwrap())
            );
        }
    }

    #[test]
    fn rule_round_trip() {
        let ex = one_port_rule();
        let text = write_rule(&ex.rule);
        let back = read_rule(&text).unwrap();
        assert_eq!(
            back.as_table().unwrap().as_ref(),
            ex.rule.as_table().unwrap().as_ref()
        );
        assert_eq!(write_rule(&back), text);
    }

    #[test]
    fn monotonized_round_trip() {
        let ex = monotonic_particle_rule();
        let text = write_rule(&ex.rule);
        let back = read_rule(&text).unwrap();
        assert_eq!(back.local_rule().radius(), 5);
        assert_eq!(write_rule(&back), text);
    }

    #[test]
    fn errors_carry_position() {
        let err = read_graph("{\n  \"signature\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = r#"{"signature":{"sigma":[],"delta":[],"pi":["p"]},"vertices":[],"edges":[{"ends":[["a","q"],["b","p"]]}]}"#;
        assert!(matches!(read_graph(bad), Err(IoError::Graph(_))));
    }
}
