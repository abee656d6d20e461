use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use cgdlab::corpus::{random_graph, random_renaming, rng, CorpusSpec};
use cgdlab::disk::{extract_disk, PointedGraph};
use cgdlab::graph::{Graph, Signature, VertexName};
use cgdlab::rule::canonicalize;

fn sig() -> Arc<Signature> {
    Arc::new(Signature::new(&["x", "y"], &["e"], &["l", "r"]).unwrap())
}

fn graph(seed: u64, max_vertices: usize) -> Graph {
    random_graph(&sig(), &CorpusSpec::new(max_vertices), &mut rng(seed))
}

/// A random subgraph of `g`: drop vertices (with their edges), then edges
/// and labels, each with probability one half.
fn sub(g: &Graph, seed: u64) -> Graph {
    use rand::Rng;
    let mut r = rng(seed);
    let keep: BTreeSet<VertexName> = g
        .vertices()
        .iter()
        .filter(|_| r.gen_bool(0.7))
        .cloned()
        .collect();
    let induced = g.induced(&keep);
    let mut b = Graph::builder(&sig());
    for v in induced.vertices() {
        b = match induced.vertex_label(v) {
            Some(l) if r.gen_bool(0.5) => b.labeled(v.clone(), l.clone()),
            _ => b.vertex(v.clone()),
        };
    }
    for e in induced.edges() {
        if r.gen_bool(0.5) {
            let [x, y] = e.ends();
            b = match induced.edge_label(e) {
                Some(l) if r.gen_bool(0.5) => b.labeled_edge(
                    (x.vertex.clone(), x.port.clone()),
                    (y.vertex.clone(), y.port.clone()),
                    l.clone(),
                ),
                _ => b.edge(
                    (x.vertex.clone(), x.port.clone()),
                    (y.vertex.clone(), y.port.clone()),
                ),
            };
        }
    }
    b.build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subgraphs_form_a_lattice(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let g = graph(seed, 6);
        let (a, b, c) = (sub(&g, s1), sub(&g, s2), sub(&g, s3));
        prop_assert!(a.is_subgraph(&g));
        let ab = a.union(&b).unwrap();
        prop_assert_eq!(&ab, &b.union(&a).unwrap());
        prop_assert!(a.is_subgraph(&ab) && b.is_subgraph(&ab) && ab.is_subgraph(&g));
        prop_assert_eq!(ab.union(&c).unwrap(), a.union(&b.union(&c).unwrap()).unwrap());
        prop_assert_eq!(a.union(&a).unwrap(), a.clone());
        let meet = a.intersection(&b);
        prop_assert_eq!(&meet, &b.intersection(&a));
        prop_assert!(meet.is_subgraph(&a) && meet.is_subgraph(&b));
        prop_assert_eq!(a.intersection(&b.intersection(&c)), a.intersection(&b).intersection(&c));
        // absorption
        prop_assert_eq!(a.union(&meet).unwrap(), a.clone());
        prop_assert_eq!(a.intersection(&ab), a.clone());
        prop_assert_eq!(a.is_subgraph(&b), a.union(&b).unwrap() == b);
        prop_assert_eq!(a.is_subgraph(&b), a.intersection(&b) == a);
    }

    #[test]
    fn unions_of_unrelated_graphs_fail_only_on_conflict(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (graph(s1, 4), graph(s2, 4));
        match a.union(&b) {
            Ok(u) => prop_assert!(a.is_subgraph(&u) && b.is_subgraph(&u)),
            Err(_) => prop_assert!(a.conflict_with(&b).unwrap().is_some()),
        }
    }

    #[test]
    fn renaming_is_invertible_and_composes(seed in any::<u64>(), rs in any::<u64>()) {
        let g = graph(seed, 6);
        let mut r = rng(rs);
        let (p, q) = (random_renaming(&g, 3, &mut r), random_renaming(&g, 3, &mut r));
        prop_assert_eq!(p.inverse().apply_graph(&p.apply_graph(&g)), g.clone());
        let pg = p.apply_graph(&g);
        let q2 = random_renaming(&pg, 2, &mut r);
        prop_assert_eq!(q2.compose(&p).apply_graph(&g), q2.apply_graph(&pg));
        prop_assert_eq!(q.apply_graph(&g).vertex_count(), g.vertex_count());
        prop_assert!(p.apply_graph(&g).validate().is_ok());
    }

    #[test]
    fn canonical_form_ignores_names(seed in any::<u64>(), rs in any::<u64>(), radius in 0usize..3) {
        let g = graph(seed, 6);
        let v = g.vertices().iter().next().unwrap().clone();
        let d = extract_disk(&g, &v, radius).unwrap();
        let ren = random_renaming(&g, 3, &mut rng(rs));
        let renamed = PointedGraph { graph: ren.apply_graph(&d.graph), center: ren.apply_name(&d.center) };
        let (c1, w1) = canonicalize(&d).unwrap();
        let (c2, _) = canonicalize(&renamed).unwrap();
        prop_assert_eq!(&c1, &c2);
        // the witness carries the disk onto its canonical form
        prop_assert_eq!(w1.apply_graph(&d.graph), Some(c1.disk().graph.clone()));
    }

    #[test]
    fn disks_commute_with_renaming(seed in any::<u64>(), rs in any::<u64>(), radius in 0usize..3) {
        let g = graph(seed, 7);
        let ren = random_renaming(&g, 2, &mut rng(rs));
        let rg = ren.apply_graph(&g);
        for v in g.vertices() {
            let d = extract_disk(&g, v, radius).unwrap();
            let rd = extract_disk(&rg, &ren.apply_name(v), radius).unwrap();
            prop_assert_eq!(ren.apply_graph(&d.graph), rd.graph);
        }
    }
}
