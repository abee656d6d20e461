//! Finite fragments of the categorical picture: subgraph isomorphisms, the
//! category of disks with an uncentered empty disk, the comma category of
//! disk occurrences in a graph, and the cocone `θ` into `F(G)`.
//!
//! Morphisms carry an injection defined exactly on the source's vertices;
//! two morphisms are equal when they agree there. Conjugates act on derived
//! names through [`NameMap::apply_derived`].

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::disk::{enumerate_subdisks, extract_disk, DiskError, PointedGraph};
use crate::dynamics::{Dynamics, DynamicsError};
use crate::graph::{Graph, GraphError, NameMap, Renaming, VertexName};
use crate::rule::{canonicalize, CanonicalDisk, RuleError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("graphs are over different signatures")]
    SignatureMismatch,
    #[error("target of the first morphism is not the source of the second")]
    NotComposable,
    #[error("map does not send the source into the target")]
    NotAMorphism,
    #[error("conjugate scheme gives no morphism for component {0}")]
    BrokenConjugate(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// A subgraph isomorphism `m: G → H`, i.e. `|m|(G) ⊆ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Graph,
    target: Graph,
    map: NameMap,
}

impl Morphism {
    /// Checks that `map` is defined exactly on `V(source)` and sends
    /// `source` into `target`.
    pub fn new(source: Graph, target: Graph, map: NameMap) -> Result<Self, CategoryError> {
        if source.signature() != target.signature() {
            return Err(CategoryError::SignatureMismatch);
        }
        if map.len() != source.vertex_count() {
            return Err(CategoryError::NotAMorphism);
        }
        let image = map
            .apply_graph(&source)
            .ok_or(CategoryError::NotAMorphism)?;
        if !image.is_subgraph(&target) {
            return Err(CategoryError::NotAMorphism);
        }
        Ok(Morphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(g: &Graph) -> Self {
        Morphism {
            source: g.clone(),
            target: g.clone(),
            map: NameMap::identity_on(g.vertices()),
        }
    }

    /// The inclusion `g ⊆ h`.
    pub fn inclusion(g: &Graph, h: &Graph) -> Result<Self, CategoryError> {
        Morphism::new(g.clone(), h.clone(), NameMap::identity_on(g.vertices()))
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn map(&self) -> &NameMap {
        &self.map
    }

    pub fn image(&self) -> Graph {
        self.map
            .apply_graph(&self.source)
            .expect("defined on the source")
    }

    pub fn is_inclusion(&self) -> bool {
        self.map.is_identity()
    }

    /// Whether the morphism has an inverse, i.e. `|m|(source) = target`.
    pub fn is_iso(&self) -> bool {
        self.image() == self.target
    }

    pub fn inverse(&self) -> Option<Morphism> {
        self.is_iso().then(|| Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: self.map.inverse(),
        })
    }
}

/// `n ∘ m`.
pub fn compose(n: &Morphism, m: &Morphism) -> Result<Morphism, CategoryError> {
    if m.target.signature() != n.source.signature() {
        return Err(CategoryError::SignatureMismatch);
    }
    if m.target != n.source {
        return Err(CategoryError::NotComposable);
    }
    Ok(Morphism {
        source: m.source.clone(),
        target: n.target.clone(),
        map: n.map.compose(&m.map),
    })
}

/// Every morphism `G → H`, ordered by the images of `G`'s vertices taken
/// in name order.
pub fn enumerate_morphisms(g: &Graph, h: &Graph) -> Vec<Morphism> {
    if g.signature() != h.signature() {
        return Vec::new();
    }
    let sources: Vec<&VertexName> = g.vertices().iter().collect();
    let targets: Vec<&VertexName> = h.vertices().iter().collect();
    let mut out = Vec::new();
    let mut assignment: BTreeMap<&VertexName, &VertexName> = BTreeMap::new();
    let mut used = BTreeSet::new();
    extend_assignment(
        g,
        h,
        &sources,
        &targets,
        &mut assignment,
        &mut used,
        &mut out,
    );
    out
}

fn extend_assignment<'a>(
    g: &'a Graph,
    h: &'a Graph,
    sources: &[&'a VertexName],
    targets: &[&'a VertexName],
    assignment: &mut BTreeMap<&'a VertexName, &'a VertexName>,
    used: &mut BTreeSet<&'a VertexName>,
    out: &mut Vec<Morphism>,
) {
    let Some((&v, rest)) = sources.split_first() else {
        let map = NameMap::from_pairs(assignment.iter().map(|(a, b)| ((*a).clone(), (*b).clone())))
            .expect("assignment is injective");
        out.push(Morphism {
            source: g.clone(),
            target: h.clone(),
            map,
        });
        return;
    };
    for &w in targets {
        if used.contains(w) {
            continue;
        }
        if let Some(l) = g.vertex_label(v) {
            if h.vertex_label(w) != Some(l) {
                continue;
            }
        }
        assignment.insert(v, w);
        if edges_preserved(g, h, v, assignment) {
            used.insert(w);
            extend_assignment(g, h, rest, targets, assignment, used, out);
            used.remove(w);
        }
        assignment.remove(v);
    }
}

/// Every edge at `v` whose ends are both assigned is present in `h`.
fn edges_preserved(
    g: &Graph,
    h: &Graph,
    v: &VertexName,
    assignment: &BTreeMap<&VertexName, &VertexName>,
) -> bool {
    g.edges_at(v).all(|e| {
        let [a, b] = e.ends();
        let (Some(&x), Some(&y)) = (assignment.get(&a.vertex), assignment.get(&b.vertex)) else {
            return true;
        };
        let Some(image) = h.edge_at(x, &a.port) else {
            return false;
        };
        let far = image.other(&crate::graph::Endpoint::new(x.clone(), a.port.clone()));
        far.is_some_and(|f| f.vertex == *y && f.port == b.port)
            && g.edge_label(e)
                .is_none_or(|l| h.edge_label(image) == Some(l))
    })
}

/// An object of the category of disks: a radius-`r` disk, or the empty
/// disk without center.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiskObject {
    pub graph: Graph,
    pub center: Option<VertexName>,
}

impl DiskObject {
    pub fn empty(g: &Graph) -> Self {
        DiskObject {
            graph: Graph::empty(g.signature().clone()),
            center: None,
        }
    }

    pub fn proper(d: CanonicalDisk) -> Self {
        let d = d.into_disk();
        DiskObject {
            graph: d.graph,
            center: Some(d.center),
        }
    }

    pub fn as_pointed(&self) -> Option<PointedGraph> {
        self.center.as_ref().map(|c| PointedGraph {
            graph: self.graph.clone(),
            center: c.clone(),
        })
    }
}

/// Whether `m` is a morphism of disks `a → b`: centers are aligned.
pub fn is_disk_morphism(a: &DiskObject, b: &DiskObject, m: &Morphism) -> bool {
    m.source == a.graph
        && m.target == b.graph
        && match (&a.center, &b.center) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(c1), Some(c2)) => m.map.get(c1) == Some(c2),
        }
}

/// A disk together with an occurrence in the base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommaObject {
    pub object: DiskObject,
    pub occurrence: Morphism,
}

impl CommaObject {
    /// Center of the occurrence in the base graph.
    pub fn located_center(&self) -> Option<VertexName> {
        self.object.center.as_ref().map(|c| {
            self.occurrence
                .map
                .get(c)
                .expect("occurrence covers the disk")
                .clone()
        })
    }
}

/// The empty disk plus every canonical radius-`r` disk with each of its
/// occurrences in `g`. Occurrences of a disk centered at `v` are exactly
/// the sub-disks of `g` at `v`, since disks have no non-trivial
/// automorphism fixing their center.
pub fn comma_objects(r: usize, g: &Graph, cap: usize) -> Result<Vec<CommaObject>, CategoryError> {
    let mut out = vec![CommaObject {
        object: DiskObject::empty(g),
        occurrence: Morphism {
            source: Graph::empty(g.signature().clone()),
            target: g.clone(),
            map: NameMap::new(),
        },
    }];
    for v in g.vertices() {
        for sub in enumerate_subdisks(g, v, r, cap)? {
            let (canon, witness) = canonicalize(&sub)?;
            let object = DiskObject::proper(canon);
            let occurrence = Morphism {
                source: object.graph.clone(),
                target: g.clone(),
                map: witness.inverse(),
            };
            out.push(CommaObject { object, occurrence });
        }
    }
    Ok(out)
}

/// A morphism `⟨n, m⟩: ⟨C₁, m ∘ n⟩ → ⟨C₂, m⟩` of the comma category, by
/// object indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommaMorphism {
    pub from: usize,
    pub to: usize,
    pub n: Morphism,
}

/// The comma morphism `from → to` if there is one: `n = m_to⁻¹ ∘ m_from`
/// must be a disk morphism.
pub fn comma_morphism(objects: &[CommaObject], from: usize, to: usize) -> Option<CommaMorphism> {
    let (a, b) = (&objects[from], &objects[to]);
    let map = b.occurrence.map.inverse().compose(&a.occurrence.map);
    if map.len() != a.object.graph.vertex_count() {
        return None;
    }
    let n = Morphism::new(a.object.graph.clone(), b.object.graph.clone(), map).ok()?;
    is_disk_morphism(&a.object, &b.object, &n).then_some(CommaMorphism { from, to, n })
}

/// How a dynamics acts on the renaming of a morphism: the map carried by
/// `f̃(n)` or `θ`, restricted to the given output vertices.
pub type ConjugateScheme = dyn Fn(&NameMap, &BTreeSet<VertexName>) -> Option<NameMap> + Sync;

/// Renamings acting on derived names, the conjugates of every rule that
/// names fresh vertices by extending input names.
pub fn derived_conjugate(m: &NameMap, names: &BTreeSet<VertexName>) -> Option<NameMap> {
    NameMap::from_pairs(
        names
            .iter()
            .map(|v| m.apply_derived(v).map(|w| (v.clone(), w)))
            .collect::<Option<Vec<_>>>()?,
    )
    .ok()
}

/// A family of morphisms from `f̃` of every comma object into `apex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub apex: Graph,
    pub components: Vec<Morphism>,
}

/// Why a candidate cocone does not factor uniquely through `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// `λ` with `ξ = λ ∘ θ` componentwise.
    Unique(Morphism),
    /// Two components ask for different images of the same vertex.
    Conflict(VertexName),
    /// Some vertex of `F(G)` is in no component image, so `λ` is not unique.
    Undetermined(VertexName),
    /// The forced map does not send `F(G)` into the apex.
    NotAMorphism,
}

/// The diagram `f̃ ∘ Proj: ĩ/G → 𝐆` of a dynamics at a graph, with `F(G)`.
pub struct CommaDiagram {
    graph: Graph,
    objects: Vec<CommaObject>,
    outputs: Vec<Graph>,
    image: Graph,
}

impl CommaDiagram {
    pub fn new(dynamics: &Dynamics, g: &Graph, cap: usize) -> Result<Self, CategoryError> {
        let objects = comma_objects(dynamics.radius(), g, cap)?;
        let outputs = objects
            .iter()
            .map(|o| match o.object.as_pointed() {
                None => Ok(Graph::empty(g.signature().clone())),
                Some(d) => dynamics.rule().eval(&d),
            })
            .collect::<Result<Vec<_>, RuleError>>()?;
        let image = dynamics.apply_cgd(g)?;
        Ok(CommaDiagram {
            graph: g.clone(),
            objects,
            outputs,
            image,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn objects(&self) -> &[CommaObject] {
        &self.objects
    }

    /// `f̃` of each object.
    pub fn outputs(&self) -> &[Graph] {
        &self.outputs
    }

    /// `F(G)` as computed by the dynamics.
    pub fn image(&self) -> &Graph {
        &self.image
    }

    /// Morphisms generating the comma category: the empty disk into every
    /// object, and every proper disk into the full disk at its center.
    /// For any comma morphism `n: D₁ → D₂` at `v`, functoriality of `f̃`
    /// gives `f̃(D₂ → G^r_v) ∘ f̃(n) = f̃(D₁ → G^r_v)`, so commutation on
    /// these implies commutation on `n`.
    pub fn generators(&self) -> Vec<CommaMorphism> {
        let mut full: BTreeMap<VertexName, (usize, usize)> = BTreeMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if let Some(c) = o.located_center() {
                let size = o.object.graph.vertex_count()
                    + o.object.graph.edges().len()
                    + o.object.graph.vertex_labels().len()
                    + o.object.graph.edge_labels().len();
                let e = full.entry(c).or_insert((i, size));
                if size > e.1 {
                    *e = (i, size);
                }
            }
        }
        let mut out = Vec::new();
        for (i, o) in self.objects.iter().enumerate().skip(1) {
            out.push(comma_morphism(&self.objects, 0, i).expect("empty disk is initial"));
            let (top, _) = full[&o.located_center().expect("proper disk")];
            if top != i {
                out.push(
                    comma_morphism(&self.objects, i, top)
                        .expect("sub-disks embed in the full disk"),
                );
            }
        }
        out
    }

    /// Comma morphisms between every ordered pair of objects, for small
    /// diagrams.
    pub fn all_morphisms(&self) -> Vec<CommaMorphism> {
        let n = self.objects.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| comma_morphism(&self.objects, i, j))
            .collect()
    }

    /// Whether the objects are connected by the given morphisms, ignoring
    /// direction.
    pub fn is_connected(&self, morphisms: &[CommaMorphism]) -> bool {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for m in morphisms {
            let (a, b) = (find(&mut parent, m.from), find(&mut parent, m.to));
            parent[a] = b;
        }
        n > 0 && (0..n).all(|i| find(&mut parent, i) == find(&mut parent, 0))
    }

    /// `f̃(n)` under a conjugate scheme.
    pub fn f_tilde(
        &self,
        m: &CommaMorphism,
        scheme: &ConjugateScheme,
    ) -> Result<Morphism, CategoryError> {
        let src = &self.outputs[m.from];
        let map =
            scheme(m.n.map(), src.vertices()).ok_or(CategoryError::BrokenConjugate(m.from))?;
        Morphism::new(src.clone(), self.outputs[m.to].clone(), map)
    }

    /// The cocone `θ` into `F(G)` with components `F̄(|m|)`.
    pub fn theta(&self) -> Result<Cocone, CategoryError> {
        self.theta_with(&derived_conjugate)
    }

    pub fn theta_with(&self, scheme: &ConjugateScheme) -> Result<Cocone, CategoryError> {
        let components = self
            .objects
            .iter()
            .zip(&self.outputs)
            .enumerate()
            .map(|(i, (o, out))| {
                let map = scheme(o.occurrence.map(), out.vertices())
                    .ok_or(CategoryError::BrokenConjugate(i))?;
                Morphism::new(out.clone(), self.image.clone(), map)
                    .map_err(|_| CategoryError::BrokenConjugate(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cocone {
            apex: self.image.clone(),
            components,
        })
    }

    /// Whether `xi` is a cocone: components have the right sources and
    /// commute with the given comma morphisms.
    pub fn check_cocone(
        &self,
        xi: &Cocone,
        morphisms: &[CommaMorphism],
        scheme: &ConjugateScheme,
    ) -> Result<bool, CategoryError> {
        if xi.components.len() != self.objects.len() {
            return Ok(false);
        }
        for (c, out) in xi.components.iter().zip(&self.outputs) {
            if c.source() != out || c.target() != &xi.apex {
                return Ok(false);
            }
        }
        for m in morphisms {
            let Ok(fn_) = self.f_tilde(m, scheme) else {
                return Ok(false);
            };
            if xi.components[m.from] != compose(&xi.components[m.to], &fn_)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The apex of the colimit: union of the images of all components of
    /// `θ`.
    pub fn colimit_apex(&self, theta: &Cocone) -> Result<Graph, CategoryError> {
        let images: Vec<Graph> = theta.components.iter().map(Morphism::image).collect();
        Ok(Graph::union_all(self.graph.signature(), &images)?)
    }

    /// The mediating morphism `λ: F(G) → apex(ξ)` forced by
    /// `λ = |ξ_i| ∘ |θ_i|⁻¹` on each component.
    pub fn factor(&self, theta: &Cocone, xi: &Cocone) -> Factorization {
        let mut forced: BTreeMap<VertexName, VertexName> = BTreeMap::new();
        for (t, x) in theta.components.iter().zip(&xi.components) {
            for (v, w) in t.map().iter() {
                let target = x
                    .map()
                    .get(v)
                    .expect("component defined on its source")
                    .clone();
                match forced.get(w) {
                    Some(prev) if *prev != target => return Factorization::Conflict(w.clone()),
                    _ => {
                        forced.insert(w.clone(), target);
                    }
                }
            }
        }
        if let Some(v) = self
            .image
            .vertices()
            .iter()
            .find(|v| !forced.contains_key(*v))
        {
            return Factorization::Undetermined(v.clone());
        }
        let Ok(map) = NameMap::from_pairs(forced) else {
            return Factorization::NotAMorphism;
        };
        match Morphism::new(self.image.clone(), xi.apex.clone(), map) {
            Ok(lambda) => Factorization::Unique(lambda),
            Err(_) => Factorization::NotAMorphism,
        }
    }

    /// Candidate cocones with apex `R(F(G))` for random renamings `R`,
    /// half of them padded with extra fresh vertices. Generated lazily, as
    /// each cocone is as large as the comma category.
    pub fn candidate_cocones<'a, R: Rng>(
        &'a self,
        theta: &'a Cocone,
        count: usize,
        rng: &'a mut R,
    ) -> impl Iterator<Item = Cocone> + 'a {
        let mut bases: Vec<String> = self
            .image
            .vertices()
            .iter()
            .map(|v| v.base().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let originals = bases.clone();
        bases.extend((0..originals.len().max(2)).map(|k| format!("z{k}")));
        (0..count).map(move |k| {
            let mut shuffled = bases.clone();
            shuffled.shuffle(rng);
            let r = Renaming::from_injection(
                originals
                    .iter()
                    .map(String::as_str)
                    .zip(shuffled.iter().map(String::as_str)),
            )
            .expect("injection on bases");
            let mut apex = r.apply_graph(&self.image);
            if k % 2 == 1 {
                let extra = (0..rng.gen_range(1..=2)).map(|j| VertexName::new(&format!("pad{j}")));
                let mut b = Graph::builder(self.image.signature());
                for v in extra {
                    b = b.vertex(v);
                }
                apex = apex
                    .union(&b.build().expect("isolated vertices"))
                    .expect("fresh names");
            }
            let components = theta
                .components
                .iter()
                .map(|c| Morphism {
                    source: c.source.clone(),
                    target: apex.clone(),
                    map: NameMap::from_pairs(
                        c.map.iter().map(|(a, b)| (a.clone(), r.apply_name(b))),
                    )
                    .expect("renaming is injective"),
                })
                .collect();
            Cocone { apex, components }
        })
    }
}

/// `F̄(id) = id`, `F̄(R ∘ S) = F̄(R) ∘ F̄(S)` on the samples, and
/// `F(R(G)) = F̄(R)(F(G))` on the corpus for every sample `R`.
pub fn check_fbar_homomorphism(
    dynamics: &Dynamics,
    samples: &[(Renaming, Renaming)],
    corpus: &[Graph],
) -> Result<bool, CategoryError> {
    if !dynamics.conjugate(&Renaming::identity()).is_identity() {
        return Ok(false);
    }
    for (r, s) in samples {
        if dynamics.conjugate(&r.compose(s))
            != dynamics.conjugate(r).compose(&dynamics.conjugate(s))
        {
            return Ok(false);
        }
    }
    for g in corpus {
        let fg = dynamics.apply_cgd(g)?;
        for r in samples.iter().flat_map(|(r, s)| [r, s]) {
            if dynamics.apply_cgd(&r.apply_graph(g))? != dynamics.conjugate(r).apply_graph(&fg) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `extract_disk(g, v, r)` is the largest object centered at `v`,
/// used to sanity check comma objects.
pub fn full_disk_occurs(objects: &[CommaObject], g: &Graph, v: &VertexName, r: usize) -> bool {
    let Ok(full) = extract_disk(g, v, r) else {
        return false;
    };
    objects
        .iter()
        .any(|o| o.located_center().as_ref() == Some(v) && o.occurrence.image() == full.graph)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::Signature;
    use crate::library::particle_rule;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::new(&["x"], &[], &["l", "r"]).unwrap())
    }

    #[test]
    fn empty_source_has_one_morphism() {
        let h = Graph::builder(&sig())
            .edge(("a", "r"), ("b", "l"))
            .build()
            .unwrap();
        let ms = enumerate_morphisms(&Graph::empty(sig()), &h);
        assert_eq!(ms.len(), 1);
        assert!(ms[0].map().is_empty());
    }

    #[test]
    fn single_vertices() {
        let a = Graph::builder(&sig()).vertex("a").build().unwrap();
        let b = Graph::builder(&sig()).vertex("b").build().unwrap();
        let ms = enumerate_morphisms(&a, &b);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].map().get(&"a".into()), Some(&"b".into()));
        assert!(ms[0].is_iso());
    }

    #[test]
    fn labels_must_be_preserved() {
        let a = Graph::builder(&sig()).labeled("a", "x").build().unwrap();
        let b = Graph::builder(&sig()).vertex("b").build().unwrap();
        assert!(enumerate_morphisms(&a, &b).is_empty());
        assert_eq!(enumerate_morphisms(&b, &a).len(), 1);
    }

    #[test]
    fn two_path_into_three_path() {
        let p2 = Graph::builder(&sig())
            .edge(("u", "r"), ("w", "l"))
            .build()
            .unwrap();
        let p3 = Graph::builder(&sig())
            .edge(("a", "r"), ("b", "l"))
            .edge(("b", "r"), ("c", "l"))
            .build()
            .unwrap();
        // a→b and b→c
        assert_eq!(enumerate_morphisms(&p2, &p3).len(), 2);
    }

    #[test]
    fn composition_laws() {
        let p2 = Graph::builder(&sig())
            .edge(("u", "r"), ("w", "l"))
            .build()
            .unwrap();
        let p3 = Graph::builder(&sig())
            .edge(("a", "r"), ("b", "l"))
            .edge(("b", "r"), ("c", "l"))
            .build()
            .unwrap();
        let m = &enumerate_morphisms(&p2, &p3)[0];
        assert_eq!(&compose(&Morphism::identity(&p3), m).unwrap(), m);
        assert_eq!(&compose(m, &Morphism::identity(&p2)).unwrap(), m);
        assert_eq!(compose(m, m), Err(CategoryError::NotComposable));
    }

    #[test]
    fn comma_category_of_empty_graph() {
        let objs = comma_objects(1, &Graph::empty(sig()), 1000).unwrap();
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].object.center, None);
    }

    #[test]
    fn particle_cocone_and_corruption() {
        let ex = particle_rule();
        let dynamics = ex.dynamics();
        let g = ex.fixtures[1].0.clone();
        let diagram = CommaDiagram::new(&dynamics, &g, 100_000).unwrap();
        let gens = diagram.generators();
        assert!(diagram.is_connected(&gens));
        for v in g.vertices() {
            assert!(full_disk_occurs(diagram.objects(), &g, v, 1));
        }
        // the particle rule is not monotonic, so θ is not even well defined
        assert!(diagram.theta().is_err());

        let swap = |m: &NameMap, names: &BTreeSet<VertexName>| {
            let mut out = derived_conjugate(m, names)?;
            if names.len() >= 2 {
                let pairs: Vec<(VertexName, VertexName)> =
                    out.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
                let n = pairs.len();
                out = NameMap::from_pairs(
                    pairs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, _))| (a.clone(), pairs[(i + 1) % n].1.clone())),
                )
                .ok()?;
            }
            Some(out)
        };
        let id = identity_like(&g);
        let diagram = CommaDiagram::new(&id, &g, 100_000).unwrap();
        let theta = diagram.theta().unwrap();
        let gens = diagram.generators();
        assert!(diagram
            .check_cocone(&theta, &gens, &derived_conjugate)
            .unwrap());
        assert!(!diagram.check_cocone(&theta, &gens, &swap).unwrap());
        assert_eq!(diagram.colimit_apex(&theta).unwrap(), *diagram.image());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for xi in diagram.candidate_cocones(&theta, 6, &mut rng) {
            assert!(diagram
                .check_cocone(&xi, &gens, &derived_conjugate)
                .unwrap());
            assert!(matches!(
                diagram.factor(&theta, &xi),
                Factorization::Unique(_)
            ));
        }
        match diagram.factor(&theta, &theta) {
            Factorization::Unique(l) => assert!(l.is_inclusion()),
            other => panic!("{other:?}"),
        }
    }

    fn identity_like(g: &Graph) -> Dynamics {
        crate::library::identity_rule(g.signature().clone())
            .unwrap()
            .dynamics()
    }
}
