//! Enumeration of all disks of a given radius over a signature.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::disk::{is_disk_of_radius, PointedGraph};
use crate::graph::{Edge, Endpoint, Graph, Signature};

use super::{canonical_name, canonicalize, CanonicalDisk, RuleError};

/// Every radius-`r` disk over `sig`, up to renaming, in ascending order.
///
/// Starting from a single vertex, disks are grown one atom at a time (a
/// label, an edge between free ports, or an edge to a new vertex), keeping
/// only intermediate results that are themselves disks. Every disk is
/// reachable this way: deleting non-tree edges of a breadth-first tree, then
/// deepest leaves, then labels, stays inside the disk class.
///
/// Fails once more than `cap` distinct disks have been found.
pub fn enumerate_disks(
    sig: &Arc<Signature>,
    r: usize,
    cap: usize,
) -> Result<Vec<CanonicalDisk>, RuleError> {
    let start = PointedGraph {
        graph: Graph::builder(sig)
            .vertex(canonical_name(0))
            .build()
            .expect("single vertex"),
        center: canonical_name(0),
    };
    let (start, _) = canonicalize(&start)?;
    let mut seen: HashSet<CanonicalDisk> = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(d) = stack.pop() {
        for next in successors(sig, d.disk()) {
            if !is_disk_of_radius(&next, r) {
                continue;
            }
            let (c, _) = canonicalize(&next)?;
            if seen.insert(c.clone()) {
                if seen.len() > cap {
                    return Err(RuleError::CapExceeded(cap));
                }
                stack.push(c);
            }
        }
    }
    let mut out: Vec<CanonicalDisk> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

fn successors(sig: &Arc<Signature>, d: &PointedGraph) -> Vec<PointedGraph> {
    let g = &d.graph;
    let mut out = Vec::new();
    let with = |f: &dyn Fn(&mut Parts)| {
        let (s, mut vs, mut es, mut vl, mut el) = g.clone().into_parts();
        let mut parts = Parts {
            vertices: &mut vs,
            edges: &mut es,
            vlabels: &mut vl,
            elabels: &mut el,
        };
        f(&mut parts);
        PointedGraph {
            graph: Graph::from_parts(s, vs, es, vl, el).expect("successor is a graph"),
            center: d.center.clone(),
        }
    };

    for v in g.vertices() {
        if g.vertex_label(v).is_none() {
            for l in sig.sigma() {
                out.push(with(&|p| {
                    p.vlabels.insert(v.clone(), l.clone());
                }));
            }
        }
    }
    for e in g.edges() {
        if g.edge_label(e).is_none() {
            for l in sig.delta() {
                out.push(with(&|p| {
                    p.elabels.insert(e.clone(), l.clone());
                }));
            }
        }
    }
    let occupied: BTreeSet<&Endpoint> = g.occupancy().into_keys().collect();
    let free: Vec<Endpoint> = g
        .vertices()
        .iter()
        .flat_map(|v| {
            sig.pi()
                .iter()
                .map(move |p| Endpoint::new(v.clone(), p.clone()))
        })
        .filter(|e| !occupied.contains(e))
        .collect();
    for (i, a) in free.iter().enumerate() {
        for b in &free[i + 1..] {
            let e = Edge::new(a.clone(), b.clone()).expect("distinct slots");
            out.push(with(&|p| {
                p.edges.insert(e.clone());
            }));
        }
    }
    let fresh = canonical_name(g.vertex_count());
    for a in &free {
        for q in sig.pi() {
            let e = Edge::new(a.clone(), Endpoint::new(fresh.clone(), q.clone()))
                .expect("fresh vertex");
            out.push(with(&|p| {
                p.vertices.insert(fresh.clone());
                p.edges.insert(e.clone());
            }));
        }
    }
    out
}

struct Parts<'a> {
    vertices: &'a mut BTreeSet<crate::graph::VertexName>,
    edges: &'a mut BTreeSet<Edge>,
    vlabels: &'a mut std::collections::BTreeMap<crate::graph::VertexName, crate::graph::Label>,
    elabels: &'a mut std::collections::BTreeMap<Edge, crate::graph::Label>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_port_unlabeled_radius_one() {
        // isolated vertex, or a pair joined through the only port
        let sig = Arc::new(Signature::new::<&str>(&[], &[], &["p"]).unwrap());
        assert_eq!(enumerate_disks(&sig, 1, 100).unwrap().len(), 2);
    }

    #[test]
    fn one_port_labeled_radius_zero() {
        // center labeled or not; neighbor present or not (never labeled)
        let sig = Arc::new(Signature::new(&["x"], &[], &["p"]).unwrap());
        assert_eq!(enumerate_disks(&sig, 0, 100).unwrap().len(), 4);
    }

    #[test]
    fn radius_zero_two_ports_brute_force() {
        // Center v with ports l, r. Each port is free, joined to a distinct
        // fresh neighbor by one of its two ports, or the two center ports are
        // joined to each other (self-loop). Neighbors may be shared: one
        // neighbor reached from both center ports via its two distinct ports.
        let sig = Arc::new(Signature::new::<&str>(&[], &[], &["l", "r"]).unwrap());
        let disks = enumerate_disks(&sig, 0, 1000).unwrap();
        // free/free, self-loop, one port used (2 ports x 2 neighbor ports),
        // both used with two neighbors (2 x 2), both used with one shared
        // neighbor (2 ways to match ports)
        assert_eq!(disks.len(), 1 + 1 + 4 + 4 + 2);
        assert!(disks.iter().all(|d| is_disk_of_radius(d.disk(), 0)));
    }

    #[test]
    fn cap() {
        let sig = Arc::new(Signature::new(&["x", "y"], &["z"], &["l", "r"]).unwrap());
        assert_eq!(
            enumerate_disks(&sig, 1, 10),
            Err(RuleError::CapExceeded(10))
        );
    }
}
