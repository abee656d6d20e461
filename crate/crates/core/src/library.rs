//! Concrete rules and graphs: the moving particle, its monotonic
//! simulation, the one-port counterexample, and trivial baselines.

use std::sync::{Arc, OnceLock};

use crate::disk::PointedGraph;
use crate::dynamics::Dynamics;
use crate::graph::{Graph, Label, Port, Signature, VertexName};
use crate::monotonizer::{Encoding, MonotonizedRule, STAR};
use crate::rule::{enumerate_disks, LocalRule, RuleError, RuleTable};

pub const RIGHT: &str = "▶";
pub const LEFT: &str = "◀";

/// Disk budget when tabulating example rules.
const TABULATION_CAP: usize = 200_000;

/// A rule, either as a finite table or as the monotonic simulation of a
/// tabulated rule.
#[derive(Clone, Debug)]
pub enum ExampleRule {
    Table(Arc<RuleTable>),
    Monotonized(Arc<MonotonizedRule>),
}

impl ExampleRule {
    pub fn local_rule(&self) -> Arc<dyn LocalRule> {
        match self {
            ExampleRule::Table(t) => t.clone(),
            ExampleRule::Monotonized(m) => m.clone(),
        }
    }

    pub fn as_table(&self) -> Option<&Arc<RuleTable>> {
        match self {
            ExampleRule::Table(t) => Some(t),
            ExampleRule::Monotonized(_) => None,
        }
    }
}

/// A rule with fixtures `(G, F(G))`.
#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: &'static str,
    pub description: &'static str,
    pub signature: Arc<Signature>,
    pub rule: ExampleRule,
    pub fixtures: Vec<(Graph, Graph)>,
}

impl NamedExample {
    pub fn dynamics(&self) -> Dynamics {
        Dynamics::from_arc(self.rule.local_rule())
    }
}

/// Names of the built-in examples, as accepted by [`example`].
pub const EXAMPLE_NAMES: [&str; 4] = [
    "particle",
    "monotonic_particle",
    "one_port",
    "identity_particle",
];

/// Look up a built-in example by name.
pub fn example(name: &str) -> Option<NamedExample> {
    match name {
        "particle" => Some(particle_rule()),
        "monotonic_particle" => Some(monotonic_particle_rule()),
        "one_port" => Some(one_port_rule()),
        "identity_particle" => identity_rule(particle_signature()).ok(),
        _ => None,
    }
}

pub fn particle_signature() -> Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| Arc::new(Signature::new(&[RIGHT, LEFT], &[], &["l", "r"]).expect("valid")))
        .clone()
}

fn direction_port(label: &Label) -> Option<Port> {
    match label.as_str() {
        RIGHT => Some(Port::new("r")),
        LEFT => Some(Port::new("l")),
        _ => None,
    }
}

fn flip(label: &Label) -> Label {
    Label::new(if label.as_str() == RIGHT { LEFT } else { RIGHT })
}

/// One particle step at the center of a radius-1 disk.
///
/// A particle moves along its direction port onto an unlabeled neighbor and
/// bounces (flips direction) otherwise, including against another particle.
/// An unlabeled vertex receives the particle of the unique neighbor moving
/// onto it; two particles arriving at once annihilate. An isolated
/// unlabeled vertex spawns a right-going particle.
fn particle_step(d: &PointedGraph) -> Result<Graph, RuleError> {
    let g = &d.graph;
    let c = &d.center;
    let next = match g.vertex_label(c) {
        Some(label) => {
            let p = direction_port(label).expect("particle label");
            let moves = g
                .edge_at(c, &p)
                .and_then(|e| e.other(&crate::graph::Endpoint::new(c.clone(), p.clone())))
                .is_some_and(|u| u.vertex != *c && g.vertex_label(&u.vertex).is_none());
            (!moves).then(|| flip(label))
        }
        None if g.degree(c) == 0 => Some(Label::new(RIGHT)),
        None => {
            let incoming: Vec<&Label> = g
                .edges_at(c)
                .filter(|e| !e.is_self_loop())
                .filter_map(|e| {
                    let theirs = e.ends().iter().find(|end| end.vertex != *c)?;
                    let label = g.vertex_label(&theirs.vertex)?;
                    (direction_port(label)? == theirs.port).then_some(label)
                })
                .collect();
            match incoming.as_slice() {
                [one] => Some((*one).clone()),
                _ => None,
            }
        }
    };
    let mut b = Graph::builder(g.signature()).vertex(c.clone());
    if let Some(l) = next {
        b = b.labeled(c.clone(), l);
    }
    for e in g.edges_at(c) {
        let [x, y] = e.ends();
        b = b.edge(
            (x.vertex.clone(), x.port.clone()),
            (y.vertex.clone(), y.port.clone()),
        );
    }
    Ok(b.build()?)
}

fn particle_table() -> Arc<RuleTable> {
    static TABLE: OnceLock<Arc<RuleTable>> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            let sig = particle_signature();
            let domain =
                enumerate_disks(&sig, 1, TABULATION_CAP).expect("particle disks fit the cap");
            Arc::new(
                RuleTable::tabulate(sig, 1, false, &domain, particle_step).expect("particle rule"),
            )
        })
        .clone()
}

fn line(labels: &[(&str, Option<&str>)]) -> Graph {
    let sig = particle_signature();
    let mut b = Graph::builder(&sig);
    for (v, l) in labels {
        b = match l {
            Some(l) => b.labeled(*v, *l),
            None => b.vertex(*v),
        };
    }
    for w in labels.windows(2) {
        b = b.edge((w[0].0, "r"), (w[1].0, "l"));
    }
    b.build().expect("path graph")
}

/// The three evolutions of the moving particle shown on its figure, as
/// `(G, F(G))`: spawning, moving right, bouncing.
pub fn particle_rows() -> Vec<(Graph, Graph)> {
    vec![
        (line(&[("b", None)]), line(&[("b", Some(RIGHT))])),
        (
            line(&[("a", None), ("b", Some(RIGHT)), ("c", None)]),
            line(&[("a", None), ("b", None), ("c", Some(RIGHT))]),
        ),
        (
            line(&[("a", None), ("b", Some(RIGHT))]),
            line(&[("a", None), ("b", Some(LEFT))]),
        ),
    ]
}

/// The moving particle on paths with ports `l` and `r`.
pub fn particle_rule() -> NamedExample {
    let mut fixtures = particle_rows();
    fixtures.extend([
        (
            line(&[("a", None), ("b", Some(LEFT)), ("c", None)]),
            line(&[("a", Some(LEFT)), ("b", None), ("c", None)]),
        ),
        (
            line(&[("b", Some(LEFT)), ("c", None)]),
            line(&[("b", Some(RIGHT)), ("c", None)]),
        ),
        (
            line(&[
                ("x", None),
                ("a", Some(LEFT)),
                ("b", Some(RIGHT)),
                ("y", None),
            ]),
            line(&[
                ("x", Some(LEFT)),
                ("a", None),
                ("b", None),
                ("y", Some(RIGHT)),
            ]),
        ),
        (
            line(&[("a", Some(RIGHT)), ("b", Some(LEFT))]),
            line(&[("a", Some(LEFT)), ("b", Some(RIGHT))]),
        ),
    ]);
    NamedExample {
        name: "particle",
        description: "particle moving along a path, bouncing at the ends",
        signature: particle_signature(),
        rule: ExampleRule::Table(particle_table()),
        fixtures,
    }
}

/// The monotonic simulation of [`particle_rule`], over the extended
/// signature, with the encoded figure rows as fixtures.
pub fn monotonic_particle_rule() -> NamedExample {
    static RULE: OnceLock<Arc<MonotonizedRule>> = OnceLock::new();
    let rule = RULE
        .get_or_init(|| {
            Arc::new(MonotonizedRule::from_table(particle_table()).expect("extensible signature"))
        })
        .clone();
    let enc = rule.encoding().clone();
    let fixtures = particle_rows()
        .iter()
        .map(|(g, h)| (enc.encode_graph(g), enc.encode_graph(h)))
        .collect();
    NamedExample {
        name: "monotonic_particle",
        description: "monotonic simulation of the particle through the loopback encoding",
        signature: enc.extended().clone(),
        rule: ExampleRule::Monotonized(rule),
        fixtures,
    }
}

/// A total graph, a coherent partial graph and an incoherent graph over
/// the extended particle signature, in that order.
pub fn coherence_classes() -> [Graph; 3] {
    let enc = Encoding::new(particle_signature()).expect("extensible signature");
    let total = enc.encode_graph(&line(&[("a", None), ("b", Some(RIGHT))]));
    let sig = enc.extended().clone();
    let partial = Graph::builder(&sig)
        .labeled("a", STAR)
        .vertex("b")
        .labeled_edge(("a", "l"), ("a", "l'"), STAR)
        .build()
        .expect("valid");
    let incoherent = Graph::builder(&sig)
        .labeled("a", STAR)
        .vertex("b")
        .labeled_edge(("a", "l"), ("a", "l'"), STAR)
        .edge(("a", "r"), ("b", "l'"))
        .build()
        .expect("valid");
    [total, partial, incoherent]
}

pub fn one_port_signature() -> Arc<Signature> {
    Arc::new(Signature::new::<&str>(&[], &[], &["p"]).expect("valid"))
}

/// A rule on one port acting inconsistently on the only two radius-1
/// disks: an isolated vertex `v` grows a partner `v.0`, and a connected
/// pair is split.
pub fn one_port_rule() -> NamedExample {
    let sig = one_port_signature();
    let domain = enumerate_disks(&sig, 1, TABULATION_CAP).expect("two disks");
    let table = RuleTable::tabulate(sig.clone(), 1, false, &domain, |d| {
        let g = &d.graph;
        let c = &d.center;
        let b = Graph::builder(&sig);
        let out = if g.degree(c) == 0 {
            b.edge((c.clone(), "p"), (c.child(0), "p"))
        } else {
            g.vertices().iter().fold(b, |b, v| b.vertex(v.clone()))
        };
        Ok(out.build()?)
    })
    .expect("one-port rule");
    let a = VertexName::from("a");
    let isolated = Graph::builder(&sig)
        .vertex(a.clone())
        .build()
        .expect("valid");
    let grown = Graph::builder(&sig)
        .edge((a.clone(), "p"), (a.child(0), "p"))
        .build()
        .expect("valid");
    let pair = Graph::builder(&sig)
        .edge(("a", "p"), ("b", "p"))
        .build()
        .expect("valid");
    let split = Graph::builder(&sig)
        .vertex("a")
        .vertex("b")
        .build()
        .expect("valid");
    NamedExample {
        name: "one_port",
        description: "single-port rule splitting pairs and pairing isolated vertices",
        signature: sig,
        rule: ExampleRule::Table(Arc::new(table)),
        fixtures: vec![(isolated, grown), (pair, split)],
    }
}

/// The radius-0 rule reproducing each vertex with its incident edges, so
/// that `F` is the identity. Fails if `sig` has too many radius-0 disks.
pub fn identity_rule(sig: Arc<Signature>) -> Result<NamedExample, RuleError> {
    let domain = enumerate_disks(&sig, 0, TABULATION_CAP)?;
    let table = RuleTable::tabulate(sig.clone(), 0, false, &domain, |d| Ok(d.graph.clone()))?;
    let fixtures = if *sig == *particle_signature() {
        particle_rows()
            .into_iter()
            .map(|(g, _)| (g.clone(), g))
            .collect()
    } else {
        Vec::new()
    };
    Ok(NamedExample {
        name: "identity",
        description: "radius-0 identity",
        signature: sig,
        rule: ExampleRule::Table(Arc::new(table)),
        fixtures,
    })
}

/// The rule mapping every disk to the empty graph.
pub fn empty_rule(sig: Arc<Signature>) -> NamedExample {
    NamedExample {
        name: "empty",
        description: "maps everything to the empty graph",
        rule: ExampleRule::Table(Arc::new(RuleTable::new(sig.clone(), 0, true))),
        signature: sig,
        fixtures: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_fixtures(ex: &NamedExample) {
        let dynamics = ex.dynamics();
        for (g, want) in &ex.fixtures {
            assert_eq!(
                &dynamics.apply_cgd(g).unwrap(),
                want,
                "{} on {g:?}",
                ex.name
            );
        }
    }

    #[test]
    fn particle_fixtures() {
        let ex = particle_rule();
        check_fixtures(&ex);
        assert_eq!(ex.rule.as_table().unwrap().bound(), 3);
    }

    #[test]
    fn one_port_fixtures() {
        let ex = one_port_rule();
        assert_eq!(ex.rule.as_table().unwrap().len(), 2);
        check_fixtures(&ex);
    }

    #[test]
    fn identity_and_empty() {
        let id = identity_rule(particle_signature()).unwrap();
        check_fixtures(&id);
        let empty = empty_rule(particle_signature()).dynamics();
        for (g, _) in particle_rows() {
            assert!(empty.apply_cgd(&g).unwrap().is_empty());
        }
    }

    #[test]
    fn monotonic_particle_fixtures() {
        check_fixtures(&monotonic_particle_rule());
    }

    #[test]
    fn coherence_classification() {
        let enc = Encoding::new(particle_signature()).unwrap();
        let [total, partial, incoherent] = coherence_classes();
        assert!(enc.decode_graph(&total).is_ok());
        assert_eq!(enc.coh(&partial), partial);
        assert!(enc.decode_graph(&partial).is_err());
        assert_ne!(enc.coh(&incoherent), incoherent);
        assert_eq!(enc.coh(&incoherent), partial);
        assert!(partial.is_subgraph(&total) && partial.is_subgraph(&incoherent));
    }
}
