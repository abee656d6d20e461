//! Distances, balls, disks and sub-disk enumeration.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Label, VertexName};

/// Default bound on the number of sub-disks [`enumerate_subdisks`] may
/// produce before giving up.
pub const DEFAULT_SUBDISK_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiskError {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexName),
    #[error("sub-disk enumeration exceeded the cap of {0} candidates")]
    CapExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A graph with a distinguished vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedGraph {
    pub graph: Graph,
    pub center: VertexName,
}

impl std::fmt::Debug for PointedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?} @ {})", self.graph, self.center)
    }
}

impl PointedGraph {
    pub fn new(graph: Graph, center: VertexName) -> Result<Self, DiskError> {
        if !graph.contains_vertex(&center) {
            return Err(DiskError::MissingVertex(center));
        }
        Ok(PointedGraph { graph, center })
    }
}

fn require(g: &Graph, v: &VertexName) -> Result<(), DiskError> {
    if g.contains_vertex(v) {
        Ok(())
    } else {
        Err(DiskError::MissingVertex(v.clone()))
    }
}

/// Edges at each vertex of a graph, for repeated local queries.
///
/// Building the index is linear in the graph; afterwards a ball or disk
/// costs time proportional to its own size.
pub struct Neighborhoods<'a> {
    graph: &'a Graph,
    at: BTreeMap<&'a VertexName, Vec<&'a Edge>>,
}

impl<'a> Neighborhoods<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        let mut at: BTreeMap<&VertexName, Vec<&Edge>> = BTreeMap::new();
        for e in graph.edges() {
            let [a, b] = e.ends();
            at.entry(&a.vertex).or_default().push(e);
            if a.vertex != b.vertex {
                at.entry(&b.vertex).or_default().push(e);
            }
        }
        Neighborhoods { graph, at }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    fn edges_at(&self, v: &VertexName) -> &[&'a Edge] {
        self.at.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Distances from `c` to every vertex within `limit` hops.
    pub fn distances(&self, c: &VertexName, limit: usize) -> BTreeMap<VertexName, usize> {
        let mut dist = BTreeMap::new();
        dist.insert(c.clone(), 0);
        let mut queue = VecDeque::from([(c.clone(), 0usize)]);
        while let Some((u, du)) = queue.pop_front() {
            if du == limit {
                continue;
            }
            for e in self.edges_at(&u) {
                let [a, b] = e.ends();
                let w = if a.vertex == u { &b.vertex } else { &a.vertex };
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), du + 1);
                    queue.push_back((w.clone(), du + 1));
                }
            }
        }
        dist
    }

    /// The graph of the radius-`r` disk at `c`, see [`extract_disk`].
    pub fn disk_graph(&self, c: &VertexName, r: usize) -> Graph {
        let g = self.graph;
        let dist = self.distances(c, r + 1);
        let inner: Vec<&VertexName> = dist
            .iter()
            .filter(|(_, &d)| d <= r)
            .map(|(v, _)| v)
            .collect();
        let vertices: BTreeSet<VertexName> = dist.keys().cloned().collect();
        let edges: BTreeSet<Edge> = inner
            .iter()
            .flat_map(|v| self.edges_at(v))
            .map(|&e| e.clone())
            .collect();
        let vlabels: BTreeMap<VertexName, Label> = inner
            .iter()
            .filter_map(|v| g.vertex_label(v).map(|l| ((*v).clone(), l.clone())))
            .collect();
        let elabels: BTreeMap<Edge, Label> = edges
            .iter()
            .filter_map(|e| g.edge_label(e).map(|l| (e.clone(), l.clone())))
            .collect();
        Graph::assemble(g.signature().clone(), vertices, edges, vlabels, elabels)
    }

    pub fn extract(&self, c: &VertexName, r: usize) -> Result<PointedGraph, DiskError> {
        require(self.graph, c)?;
        Ok(PointedGraph {
            graph: self.disk_graph(c, r),
            center: c.clone(),
        })
    }
}

/// Distances from `c` to every vertex within `limit` hops.
pub(crate) fn bounded_distances(
    g: &Graph,
    c: &VertexName,
    limit: usize,
) -> BTreeMap<VertexName, usize> {
    Neighborhoods::new(g).distances(c, limit)
}

/// Length of a shortest path from `u` to `v`, ignoring ports and labels;
/// `None` when they lie in different components.
pub fn distance(g: &Graph, u: &VertexName, v: &VertexName) -> Result<Option<usize>, DiskError> {
    require(g, u)?;
    require(g, v)?;
    Ok(g.distances_from(u).get(v).copied())
}

/// Vertices at distance at most `r` from `c`.
pub fn ball(g: &Graph, c: &VertexName, r: usize) -> Result<BTreeSet<VertexName>, DiskError> {
    require(g, c)?;
    Ok(bounded_distances(g, c, r).into_keys().collect())
}

/// The disk of radius `r` around `c`: vertices up to distance `r + 1`,
/// edges meeting the inner ball, and labels only on the inner ball and on
/// the kept edges.
pub fn extract_disk(g: &Graph, c: &VertexName, r: usize) -> Result<PointedGraph, DiskError> {
    require(g, c)?;
    Ok(PointedGraph {
        graph: disk_graph(g, c, r),
        center: c.clone(),
    })
}

pub(crate) fn disk_graph(g: &Graph, c: &VertexName, r: usize) -> Graph {
    Neighborhoods::new(g).disk_graph(c, r)
}

/// Union of the radius-`r` disks centered on `centers`.
pub fn restrict<'a>(
    g: &Graph,
    r: usize,
    centers: impl IntoIterator<Item = &'a VertexName>,
) -> Result<Graph, DiskError> {
    let index = Neighborhoods::new(g);
    let mut acc = Graph::empty(g.signature().clone());
    for c in centers {
        require(g, c)?;
        acc.absorb(&index.disk_graph(c, r));
    }
    Ok(acc)
}

/// Whether `h` is its own disk of radius `r`, i.e. a member of the set of
/// radius-`r` disks.
pub fn is_disk_of_radius(h: &PointedGraph, r: usize) -> bool {
    h.graph.contains_vertex(&h.center) && disk_graph(&h.graph, &h.center, r) == h.graph
}

/// All radius-`r` disks `(H, v)` with `H ⊆ g`, in ascending order.
///
/// Every such `H` lies inside the disk of `g` at `v`, so the search grows
/// connected edge sets from `v` inside that disk, keeps those meeting the
/// disk shape, and then ranges over all subsets of the labels they may carry.
pub fn enumerate_subdisks(
    g: &Graph,
    v: &VertexName,
    r: usize,
    cap: usize,
) -> Result<Vec<PointedGraph>, DiskError> {
    require(g, v)?;
    let dg = disk_graph(g, v, r);
    let edges: Vec<&Edge> = dg.edges().iter().collect();
    let mut incident: BTreeMap<&VertexName, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        for end in e.ends() {
            let list = incident.entry(&end.vertex).or_default();
            if list.last() != Some(&i) {
                list.push(i);
            }
        }
    }

    let mut search = Search {
        edges: &edges,
        incident: &incident,
        state: vec![Decision::Open; edges.len()],
        members: BTreeMap::from([(v, 1usize)]),
        visited: 0,
        cap,
        shapes: Vec::new(),
    };
    search.grow()?;
    let shapes = search.shapes;

    let mut out = Vec::new();
    for chosen in shapes {
        let e_h: BTreeSet<Edge> = chosen.iter().map(|&i| edges[i].clone()).collect();
        let mut v_h: BTreeSet<VertexName> = BTreeSet::from([v.clone()]);
        for e in &e_h {
            for end in e.ends() {
                v_h.insert(end.vertex.clone());
            }
        }
        let skeleton = Graph::assemble(
            dg.signature().clone(),
            v_h,
            e_h,
            BTreeMap::new(),
            BTreeMap::new(),
        );
        let dist = bounded_distances(&skeleton, v, r + 1);
        if dist.len() != skeleton.vertex_count() {
            continue;
        }
        let inner = |u: &VertexName| dist[u] <= r;
        if !skeleton
            .edges()
            .iter()
            .all(|e| e.ends().iter().any(|end| inner(&end.vertex)))
        {
            continue;
        }
        let vl: Vec<(&VertexName, &Label)> = dg
            .vertex_labels()
            .iter()
            .filter(|(u, _)| skeleton.contains_vertex(u) && inner(u))
            .collect();
        let el: Vec<(&Edge, &Label)> = dg
            .edge_labels()
            .iter()
            .filter(|(e, _)| skeleton.edges().contains(*e))
            .collect();
        let k = vl.len() + el.len();
        if k >= usize::BITS as usize - 1 || out.len() + (1usize << k) > cap {
            return Err(DiskError::CapExceeded(cap));
        }
        for mask in 0u64..(1u64 << k) {
            let vlabels = vl
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, (u, l))| ((*u).clone(), (*l).clone()))
                .collect();
            let elabels = el
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> (vl.len() + i) & 1 == 1)
                .map(|(_, (e, l))| ((*e).clone(), (*l).clone()))
                .collect();
            let (sig, vs, es, _, _) = skeleton.clone().into_parts();
            out.push(PointedGraph {
                graph: Graph::assemble(sig, vs, es, vlabels, elabels),
                center: v.clone(),
            });
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Decision {
    Open,
    In,
    Out,
}

/// Include/exclude search over connected edge sets containing a root
/// vertex. Each connected set is produced exactly once.
struct Search<'a> {
    edges: &'a [&'a Edge],
    incident: &'a BTreeMap<&'a VertexName, Vec<usize>>,
    state: Vec<Decision>,
    /// Vertices reached so far, with multiplicity for cheap backtracking.
    members: BTreeMap<&'a VertexName, usize>,
    visited: usize,
    cap: usize,
    shapes: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn next_open(&self) -> Option<usize> {
        self.members
            .keys()
            .filter_map(|u| self.incident.get(u))
            .flatten()
            .copied()
            .filter(|&i| self.state[i] == Decision::Open)
            .min()
    }

    fn grow(&mut self) -> Result<(), DiskError> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(DiskError::CapExceeded(self.cap));
        }
        let Some(i) = self.next_open() else {
            self.shapes.push(
                (0..self.edges.len())
                    .filter(|&j| self.state[j] == Decision::In)
                    .collect(),
            );
            return Ok(());
        };
        let edge = self.edges[i];
        self.state[i] = Decision::In;
        for end in edge.ends() {
            *self.members.entry(&end.vertex).or_insert(0) += 1;
        }
        self.grow()?;
        for end in edge.ends() {
            let n = self.members.get_mut(&end.vertex).expect("added above");
            *n -= 1;
            if *n == 0 {
                self.members.remove(&end.vertex);
            }
        }
        self.state[i] = Decision::Out;
        self.grow()?;
        self.state[i] = Decision::Open;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Signature;
    use std::sync::Arc;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x"], &["y"], &["l", "r"]).unwrap())
    }

    fn path(names: &[&str], labeled: bool) -> Graph {
        let mut b = Graph::builder(&sig());
        for n in names {
            b = if labeled {
                b.labeled(*n, "x")
            } else {
                b.vertex(*n)
            };
        }
        for w in names.windows(2) {
            b = if labeled {
                b.labeled_edge((w[0], "r"), (w[1], "l"), "y")
            } else {
                b.edge((w[0], "r"), (w[1], "l"))
            };
        }
        b.build().unwrap()
    }

    #[test]
    fn distances() {
        let g = path(&["a", "b", "c"], false);
        assert_eq!(distance(&g, &"a".into(), &"a".into()).unwrap(), Some(0));
        assert_eq!(distance(&g, &"a".into(), &"c".into()).unwrap(), Some(2));
        let two = Graph::builder(&sig())
            .vertex("a")
            .vertex("b")
            .build()
            .unwrap();
        assert_eq!(distance(&two, &"a".into(), &"b".into()).unwrap(), None);
        assert!(distance(&two, &"a".into(), &"z".into()).is_err());
    }

    #[test]
    fn balls() {
        let g = path(&["a", "b", "c", "d"], false);
        let names =
            |s: BTreeSet<VertexName>| s.into_iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(names(ball(&g, &"b".into(), 0).unwrap()), ["b"]);
        assert_eq!(names(ball(&g, &"b".into(), 1).unwrap()), ["a", "b", "c"]);
        assert_eq!(names(ball(&g, &"a".into(), 2).unwrap()), ["a", "b", "c"]);
    }

    #[test]
    fn disk_of_labeled_path() {
        let g = path(&["a", "b", "c", "d"], true);
        let d = extract_disk(&g, &"b".into(), 0).unwrap();
        let want = Graph::builder(&sig())
            .labeled("b", "x")
            .labeled_edge(("a", "r"), ("b", "l"), "y")
            .labeled_edge(("b", "r"), ("c", "l"), "y")
            .build()
            .unwrap();
        assert_eq!(d.graph, want);
        assert!(is_disk_of_radius(&d, 0));
        assert!(!is_disk_of_radius(
            &PointedGraph::new(g, "a".into()).unwrap(),
            0
        ));
    }

    #[test]
    fn restriction_of_ends() {
        let g = path(&["a", "b", "c", "d"], true);
        let got = restrict(&g, 0, [&"a".into(), &"d".into()]).unwrap();
        let want = Graph::builder(&sig())
            .labeled("a", "x")
            .labeled("d", "x")
            .labeled_edge(("a", "r"), ("b", "l"), "y")
            .labeled_edge(("c", "r"), ("d", "l"), "y")
            .build()
            .unwrap();
        assert_eq!(got, want);
        assert!(restrict(&g, 0, []).unwrap().is_empty());
        assert_eq!(restrict(&g, 3, g.vertices()).unwrap(), g);
    }

    #[test]
    fn subdisks_of_labeled_vertex() {
        let g = Graph::builder(&sig()).labeled("a", "x").build().unwrap();
        let subs = enumerate_subdisks(&g, &"a".into(), 0, DEFAULT_SUBDISK_CAP).unwrap();
        assert_eq!(subs.len(), 2);
        let bare = Graph::builder(&sig()).vertex("a").build().unwrap();
        assert!(subs.iter().any(|d| d.graph == bare));
        assert!(subs.iter().any(|d| d.graph == g));
    }

    #[test]
    fn subdisks_of_path_middle() {
        // unlabeled 3-path at the middle, radius 0: {b}, {a-b}, {b-c}, {a-b-c}
        let g = path(&["a", "b", "c"], false);
        let subs = enumerate_subdisks(&g, &"b".into(), 0, DEFAULT_SUBDISK_CAP).unwrap();
        assert_eq!(subs.len(), 4);
        assert!(subs.iter().all(|d| is_disk_of_radius(d, 0)));
    }

    #[test]
    fn cap_is_enforced() {
        let g = path(&["a", "b", "c", "d", "e"], true);
        assert_eq!(
            enumerate_subdisks(&g, &"c".into(), 2, 10),
            Err(DiskError::CapExceeded(10))
        );
    }
}
