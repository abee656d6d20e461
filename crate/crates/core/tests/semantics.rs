use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use cgdlab::category::{compose, enumerate_morphisms, Morphism};
use cgdlab::corpus::{random_graph, random_renaming, rng, CorpusSpec};
use cgdlab::dot::to_dot;
use cgdlab::exec::Strategy;
use cgdlab::graph::{Graph, Signature, VertexName};
use cgdlab::io::{read_graph, write_graph};
use cgdlab::library::{monotonic_particle_rule, one_port_rule, particle_rule, particle_signature};
use cgdlab::monotonizer::{simulate, Encoding};

fn small_sig() -> Arc<Signature> {
    Arc::new(Signature::new(&["x"], &["e"], &["l", "r"]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dynamics_commute_with_renaming(seed in any::<u64>(), rs in any::<u64>()) {
        for ex in [particle_rule(), one_port_rule()] {
            let g = random_graph(&ex.signature, &CorpusSpec::new(6), &mut rng(seed));
            let dynamics = ex.dynamics();
            let r = random_renaming(&g, 2, &mut rng(rs));
            let fg = dynamics.apply_cgd(&g).unwrap();
            prop_assert_eq!(dynamics.apply_cgd(&r.apply_graph(&g)).unwrap(), dynamics.conjugate(&r).apply_graph(&fg));
        }
    }

    #[test]
    fn strategies_agree(seed in any::<u64>()) {
        let ex = particle_rule();
        let g = random_graph(&ex.signature, &CorpusSpec::new(8), &mut rng(seed));
        let dynamics = ex.dynamics();
        prop_assert_eq!(
            dynamics.apply_cgd_with(Strategy::Sequential, &g).unwrap(),
            dynamics.apply_cgd_with(Strategy::default(), &g).unwrap()
        );
    }

    #[test]
    fn monotonic_simulation(seed in any::<u64>()) {
        let base = particle_rule().dynamics();
        let f_prime = monotonic_particle_rule().dynamics();
        let g = random_graph(&particle_signature(), &CorpusSpec::new(5), &mut rng(seed));
        let s = simulate(&base, &f_prime, &g).unwrap();
        prop_assert_eq!(s.simulated, s.expected);
    }

    #[test]
    fn graph_json_round_trip(seed in any::<u64>()) {
        let g = random_graph(&small_sig(), &CorpusSpec::new(7), &mut rng(seed));
        let text = write_graph(&g);
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn dot_is_stable(seed in any::<u64>()) {
        let g = random_graph(&small_sig(), &CorpusSpec::new(7), &mut rng(seed));
        let dot = to_dot(&g);
        prop_assert_eq!(&dot, &to_dot(&read_graph(&write_graph(&g)).unwrap()));
        prop_assert_eq!(dot.matches(" -> ").count(), g.edges().len());
    }

    #[test]
    fn morphisms_compose_associatively(s1 in any::<u64>(), rs in any::<u64>()) {
        let spec = CorpusSpec::new(3);
        let g = random_graph(&small_sig(), &spec, &mut rng(s1));
        let mut r = rng(rs);
        let h = random_renaming(&g, 2, &mut r).apply_graph(&g);
        let k = random_renaming(&h, 2, &mut r).apply_graph(&h);
        let drop_one: BTreeSet<VertexName> = g.vertices().iter().skip(1).cloned().collect();
        let a = g.induced(&drop_one);
        for m in enumerate_morphisms(&a, &g) {
            prop_assert_eq!(compose(&Morphism::identity(&g), &m).unwrap(), m.clone());
            for n in enumerate_morphisms(&g, &h) {
                for p in enumerate_morphisms(&h, &k) {
                    let left = compose(&p, &compose(&n, &m).unwrap()).unwrap();
                    let right = compose(&compose(&p, &n).unwrap(), &m).unwrap();
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn invertible_morphisms_are_renamings(seed in any::<u64>(), rs in any::<u64>()) {
        let g = random_graph(&small_sig(), &CorpusSpec::new(4), &mut rng(seed));
        let h = random_renaming(&g, 2, &mut rng(rs)).apply_graph(&g);
        let all = enumerate_morphisms(&g, &h);
        prop_assert!(!all.is_empty());
        for m in all {
            prop_assert!(m.is_iso());
            prop_assert_eq!(m.map().apply_graph(&g), Some(h.clone()));
            let inv = m.inverse().unwrap();
            prop_assert_eq!(compose(&inv, &m).unwrap(), Morphism::identity(&g));
            prop_assert_eq!(compose(&m, &inv).unwrap(), Morphism::identity(&h));
        }
    }
}

#[test]
fn kan_matches_cgd_on_encoded_paths() {
    let enc = Encoding::new(particle_signature()).unwrap();
    let dynamics = monotonic_particle_rule().dynamics();
    for (g, _) in cgdlab::library::particle_rows() {
        let wg = enc.encode_graph(&g);
        assert_eq!(
            dynamics.apply_kan(&wg).unwrap(),
            dynamics.apply_cgd(&wg).unwrap()
        );
    }
}

#[test]
fn one_port_kan_differs_on_a_pair() {
    let ex = one_port_rule();
    let pair = &ex.fixtures[1].0;
    let dynamics = ex.dynamics();
    let cgd: Graph = dynamics.apply_cgd(pair).unwrap();
    assert_ne!(dynamics.apply_kan(pair).ok(), Some(cgd));
}
