//! Property suites over seeded corpora, reported as JSON.
//!
//! Each check names the property it tests, carries a short description,
//! and either passes or fails with a witness. Reports depend only on the
//! configuration, so two runs with the same seed are identical.

use std::collections::{BTreeSet, HashMap};
use std::error::Error;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::category::{
    check_fbar_homomorphism, compose, derived_conjugate, enumerate_morphisms, CommaDiagram,
    Factorization, Morphism,
};
use crate::corpus::{corpus, encoded_corpus, random_renaming, rng, CorpusSpec};
use crate::disk::{enumerate_subdisks, extract_disk, is_disk_of_radius, DiskError, PointedGraph};
use crate::dynamics::{induced_rule, Dynamics};
use crate::graph::{Edge, Endpoint, Graph, Renaming, Signature, VertexName};
use crate::library::{
    coherence_classes, identity_rule, monotonic_particle_rule, one_port_rule, particle_rows,
    particle_rule, particle_signature, ExampleRule, NamedExample,
};
use crate::monotonizer::{simulate, Encoding, MonotonizedRule};
use crate::rule::{
    check_consistency, check_disjointness, check_equivariance, check_monotonic, enumerate_disks,
    observed_bound, LocalRule, MonotonicityVerdict,
};

type CheckResult = Result<Outcome, Box<dyn Error>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub proposition_id: String,
    pub anchor_quote: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.proposition_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    witness: Option<String>,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            pass: true,
            detail: detail.into(),
            witness: None,
        }
    }

    fn fail(detail: impl Into<String>, witness: impl fmt::Debug) -> Self {
        Outcome {
            pass: false,
            detail: detail.into(),
            witness: Some(format!("{witness:?}")),
        }
    }

    fn from_bool(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            witness: None,
        }
    }
}

fn run(id: &str, quote: &str, f: impl FnOnce() -> CheckResult) -> Check {
    let start = Instant::now();
    let (status, detail, witness) = match f() {
        Ok(o) => (
            if o.pass { Status::Pass } else { Status::Fail },
            o.detail,
            o.witness,
        ),
        Err(e) => (Status::Fail, "error".to_owned(), Some(e.to_string())),
    };
    Check {
        proposition_id: id.to_owned(),
        anchor_quote: quote.to_owned(),
        status,
        witness,
        detail,
        elapsed: start.elapsed(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lattice,
    Disks,
    LocalRule,
    Kan,
    Monotonizer,
    Category,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "lattice",
        "disks",
        "localrule",
        "kan",
        "monotonizer",
        "category",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Disks => "disks",
            Suite::LocalRule => "localrule",
            Suite::Kan => "kan",
            Suite::Monotonizer => "monotonizer",
            Suite::Category => "category",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lattice" => Suite::Lattice,
            "disks" => Suite::Disks,
            "localrule" => Suite::LocalRule,
            "kan" => Suite::Kan,
            "monotonizer" => Suite::Monotonizer,
            "category" => Suite::Category,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite {other:?}, expected one of {:?}",
                    Suite::NAMES
                ))
            }
        })
    }
}

/// Corpus sizes and enumeration budgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sub-disk enumeration cap per vertex.
    pub cap: usize,
    /// Largest number of disk pairs compared by monotonicity checks.
    pub budget: usize,
    pub lattice_max_vertices: usize,
    pub disk_graphs: usize,
    pub rule_graphs: usize,
    pub simulation_graphs: usize,
    pub kan_graphs: usize,
    pub fprime_disks: usize,
    pub category_graphs: usize,
    pub candidate_cocones: usize,
    pub renaming_pairs: usize,
}

impl VerifyConfig {
    /// The sizes used by the acceptance run.
    pub fn full(seed: u64) -> Self {
        VerifyConfig {
            seed,
            cap: 1_000_000,
            budget: 1_000_000,
            lattice_max_vertices: 4,
            disk_graphs: 100,
            rule_graphs: 100,
            simulation_graphs: 200,
            kan_graphs: 200,
            fprime_disks: 500,
            category_graphs: 50,
            candidate_cocones: 20,
            renaming_pairs: 50,
        }
    }

    /// Small sizes for smoke tests.
    pub fn quick(seed: u64) -> Self {
        VerifyConfig {
            lattice_max_vertices: 3,
            disk_graphs: 10,
            rule_graphs: 10,
            simulation_graphs: 10,
            kan_graphs: 10,
            fprime_disks: 30,
            category_graphs: 4,
            candidate_cocones: 4,
            renaming_pairs: 5,
            ..VerifyConfig::full(seed)
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.budget = cap;
        self
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let checks = match suite {
        Suite::Lattice => lattice_suite(cfg),
        Suite::Disks => disk_suite(cfg),
        Suite::LocalRule => local_rule_suite(cfg),
        Suite::Kan => kan_suite(cfg),
        Suite::Monotonizer => monotonizer_suite(cfg),
        Suite::Category => category_suite(cfg),
        Suite::All => [
            lattice_suite(cfg),
            disk_suite(cfg),
            local_rule_suite(cfg),
            kan_suite(cfg),
            monotonizer_suite(cfg),
            category_suite(cfg),
        ]
        .concat(),
    };
    Report {
        suite: suite.name().to_owned(),
        seed: cfg.seed,
        checks,
    }
}

// ---------------------------------------------------------------- lattice

fn lattice_signature() -> Arc<Signature> {
    Arc::new(Signature::new(&["x"], &[], &["l", "r"]).expect("valid"))
}

/// Every perfect matching of `slots`.
fn perfect_matchings(slots: &[Endpoint]) -> Vec<Vec<(Endpoint, Endpoint)>> {
    let Some((first, rest)) = slots.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for (i, other) in rest.iter().enumerate() {
        let remaining: Vec<Endpoint> = rest
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| e.clone())
            .collect();
        for mut m in perfect_matchings(&remaining) {
            m.push((first.clone(), other.clone()));
            out.push(m);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Fully labeled graphs with every port used, on `n` vertices, one per
/// isomorphism class.
fn maximal_graphs(sig: &Arc<Signature>, n: usize) -> Vec<Graph> {
    let names: Vec<VertexName> = (0..n).map(crate::corpus::vertex_name).collect();
    let slots: Vec<Endpoint> = names
        .iter()
        .flat_map(|v| {
            sig.pi()
                .iter()
                .map(move |p| Endpoint::new(v.clone(), p.clone()))
        })
        .collect();
    let index: HashMap<&VertexName, usize> =
        names.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in perfect_matchings(&slots) {
        let key = perms
            .iter()
            .map(|p| {
                let mut edges: Vec<Edge> = m
                    .iter()
                    .map(|(a, b)| {
                        Edge::new(
                            Endpoint::new(names[p[index[&a.vertex]]].clone(), a.port.clone()),
                            Endpoint::new(names[p[index[&b.vertex]]].clone(), b.port.clone()),
                        )
                        .expect("distinct slots")
                    })
                    .collect();
                edges.sort();
                edges
            })
            .min()
            .expect("at least the identity permutation");
        if !seen.insert(key) {
            continue;
        }
        let mut b = Graph::builder(sig);
        for v in &names {
            b = b.labeled(v.clone(), "x");
        }
        for (x, y) in &m {
            b = b.edge(
                (x.vertex.clone(), x.port.clone()),
                (y.vertex.clone(), y.port.clone()),
            );
        }
        out.push(b.build().expect("perfect matching"));
    }
    out
}

/// All subgraphs of `m` as bitmasks over its atoms (vertices, vertex
/// labels, edges), with the graph each mask denotes.
fn subgraph_masks(m: &Graph) -> Vec<(u32, Graph)> {
    let vertices: Vec<&VertexName> = m.vertices().iter().collect();
    let edges: Vec<&Edge> = m.edges().iter().collect();
    let n = vertices.len();
    let atoms = 2 * n + edges.len();
    let vindex: HashMap<&VertexName, usize> =
        vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << atoms) {
        for i in 0..n {
            if mask & (1 << (n + i)) != 0 && mask & (1 << i) == 0 {
                continue 'mask;
            }
        }
        for (k, e) in edges.iter().enumerate() {
            if mask & (1 << (2 * n + k)) != 0
                && e.ends()
                    .iter()
                    .any(|end| mask & (1 << vindex[&end.vertex]) == 0)
            {
                continue 'mask;
            }
        }
        let mut b = Graph::builder(m.signature());
        for (i, v) in vertices.iter().enumerate() {
            if mask & (1 << i) != 0 {
                b = if mask & (1 << (n + i)) != 0 {
                    b.labeled((*v).clone(), m.vertex_label(v).expect("maximal").clone())
                } else {
                    b.vertex((*v).clone())
                };
            }
        }
        for (k, e) in edges.iter().enumerate() {
            if mask & (1 << (2 * n + k)) != 0 {
                let [x, y] = e.ends();
                b = b.edge(
                    (x.vertex.clone(), x.port.clone()),
                    (y.vertex.clone(), y.port.clone()),
                );
            }
        }
        out.push((mask, b.build().expect("downward closed")));
    }
    out
}

pub fn lattice_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let sig = lattice_signature();
    let exhaustive = run(
        "lattice.union_intersection_exact",
        "union is the least upper bound and intersection the greatest lower bound of two subgraphs",
        || {
            let mut pairs = 0u64;
            let mut ambients = 0;
            for n in 1..=cfg.lattice_max_vertices {
                for m in maximal_graphs(&sig, n) {
                    ambients += 1;
                    let subs = subgraph_masks(&m);
                    let by_mask: HashMap<u32, &Graph> = subs.iter().map(|(k, g)| (*k, g)).collect();
                    for (i, (a, ga)) in subs.iter().enumerate() {
                        for (b, gb) in &subs[i..] {
                            pairs += 1;
                            if ga.is_subgraph(gb) != (a & !b == 0)
                                || gb.is_subgraph(ga) != (b & !a == 0)
                            {
                                return Ok(Outcome::fail(
                                    "order differs from atom inclusion",
                                    (ga, gb),
                                ));
                            }
                            if ga.union(gb)? != *by_mask[&(a | b)] {
                                return Ok(Outcome::fail("union is not the join", (ga, gb)));
                            }
                            if ga.intersection(gb) != *by_mask[&(a & b)] {
                                return Ok(Outcome::fail("intersection is not the meet", (ga, gb)));
                            }
                        }
                    }
                }
            }
            Ok(Outcome::pass(format!(
                "{pairs} pairs over {ambients} maximal graphs"
            )))
        },
    );
    let inconsistent = run(
        "lattice.no_upper_bound_on_conflict",
        "graphs that disagree on a port or a label have no common supergraph",
        || {
            let graphs = corpus(
                &sig,
                &CorpusSpec::new(cfg.lattice_max_vertices),
                cfg.seed,
                60,
            );
            let mut conflicts = 0;
            for a in &graphs {
                for b in &graphs {
                    match a.union(b) {
                        Ok(u) => {
                            if !(a.is_subgraph(&u) && b.is_subgraph(&u)) {
                                return Ok(Outcome::fail("union is not an upper bound", (a, b)));
                            }
                            for h in &graphs {
                                if a.is_subgraph(h) && b.is_subgraph(h) && !u.is_subgraph(h) {
                                    return Ok(Outcome::fail("union is not least", (a, b, h)));
                                }
                            }
                        }
                        Err(_) => {
                            conflicts += 1;
                            if graphs.iter().any(|h| a.is_subgraph(h) && b.is_subgraph(h)) {
                                return Ok(Outcome::fail(
                                    "conflicting pair has an upper bound",
                                    (a, b),
                                ));
                            }
                        }
                    }
                }
            }
            Ok(Outcome::pass(format!(
                "{conflicts} conflicting pairs among 3600"
            )))
        },
    );
    vec![exhaustive, inconsistent]
}

// ------------------------------------------------------------------ disks

fn disk_signature() -> Arc<Signature> {
    Arc::new(Signature::new(&["x", "y"], &["e"], &["l", "r"]).expect("valid"))
}

pub fn disk_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let sig = disk_signature();
    let graphs = corpus(
        &sig,
        &CorpusSpec::new(8).with_atom_budget(14),
        cfg.seed,
        cfg.disk_graphs,
    );
    let maximum = run(
        "disk.extracted_is_maximum",
        "the extracted disk is a disk of the graph and contains every other disk at the same center",
        || {
            let mut disks = 0;
            let mut subdisks = 0;
            for g in &graphs {
                for v in g.vertices() {
                    for r in 0..=2 {
                        let d = extract_disk(g, v, r)?;
                        disks += 1;
                        if !is_disk_of_radius(&d, r) || !d.graph.is_subgraph(g) {
                            return Ok(Outcome::fail("extracted disk is not a sub-disk", (g, v, r)));
                        }
                        let subs = enumerate_subdisks(g, v, r, cfg.cap)?;
                        subdisks += subs.len();
                        if !subs.contains(&d) {
                            return Ok(Outcome::fail("extracted disk missing from the enumeration", (g, v, r)));
                        }
                        if let Some(s) = subs.iter().find(|s| !s.graph.is_subgraph(&d.graph)) {
                            return Ok(Outcome::fail("a sub-disk is not below the extracted disk", (g, s)));
                        }
                    }
                }
            }
            Ok(Outcome::pass(format!("{disks} disks, {subdisks} sub-disks, radii 0..=2")))
        },
    );
    let omega = run(
        "disk.encoding_commutes",
        "encoding a disk equals taking the disk of the encoded graph",
        || {
            let enc = Encoding::new(sig.clone())?;
            let mut count = 0;
            for g in &graphs {
                let wg = enc.encode_graph(g);
                for v in g.vertices() {
                    for r in 0..=2 {
                        count += 1;
                        let d = extract_disk(g, v, r)?;
                        if enc.encode_disk(&d, r)? != extract_disk(&wg, v, r)? {
                            return Ok(Outcome::fail("encodings differ", (g, v, r)));
                        }
                        if enc.decode_disk(&enc.encode_disk(&d, r)?, r) != Some(d) {
                            return Ok(Outcome::fail(
                                "decoding does not invert encoding",
                                (g, v, r),
                            ));
                        }
                    }
                }
            }
            Ok(Outcome::pass(format!("{count} disks")))
        },
    );
    vec![maximum, omega]
}

// ------------------------------------------------------------ local rules

/// Rename every base `b` of `d` to `b_k`.
fn rename_apart(d: &PointedGraph, k: usize) -> PointedGraph {
    let bases: BTreeSet<String> = d
        .graph
        .vertices()
        .iter()
        .map(|v| v.base().to_owned())
        .collect();
    let targets: Vec<(String, String)> = bases
        .iter()
        .map(|b| (b.clone(), format!("{b}_{k}")))
        .collect();
    let r = Renaming::from_injection(targets.iter().map(|(a, b)| (a.as_str(), b.as_str())))
        .expect("fresh names");
    PointedGraph {
        graph: r.apply_graph(&d.graph),
        center: r.apply_name(&d.center),
    }
}

fn disks_of(graphs: &[Graph], r: usize) -> Result<Vec<PointedGraph>, DiskError> {
    let mut out = Vec::new();
    for g in graphs {
        for v in g.vertices() {
            out.push(extract_disk(g, v, r)?);
        }
    }
    Ok(out)
}

/// Conditions (1)–(4) of a local rule, sampled on disks of `graphs`.
fn rule_conditions(
    rule: &dyn LocalRule,
    graphs: &[Graph],
    disks: &[PointedGraph],
    bound: usize,
    seed: u64,
) -> CheckResult {
    let mut rng = rng(seed);
    let samples: Vec<(Renaming, PointedGraph)> = disks
        .iter()
        .map(|d| (random_renaming(&d.graph, 3, &mut rng), d.clone()))
        .collect();
    if !check_equivariance(rule, &samples)? {
        return Ok(Outcome::fail("equivariance fails", &samples));
    }
    for (i, w) in disks.windows(3).enumerate() {
        let family: Vec<PointedGraph> = w
            .iter()
            .enumerate()
            .map(|(k, d)| rename_apart(d, 3 * i + k))
            .collect();
        if !check_disjointness(rule, &family)? || !check_disjointness(rule, &family[..2])? {
            return Ok(Outcome::fail(
                "disjoint disks with overlapping outputs",
                family,
            ));
        }
    }
    let observed = observed_bound(rule, disks)?;
    if observed > bound {
        return Ok(Outcome::fail(
            format!("output of {observed} vertices exceeds bound {bound}"),
            observed,
        ));
    }
    for g in graphs {
        if !check_consistency(rule, g)? {
            return Ok(Outcome::fail("inconsistent outputs", g));
        }
    }
    Ok(Outcome::pass(format!(
        "{} disks, {} graphs, largest output {observed} (bound {bound})",
        disks.len(),
        graphs.len()
    )))
}

fn fixtures_hold(ex: &NamedExample) -> CheckResult {
    let dynamics = ex.dynamics();
    for (g, want) in &ex.fixtures {
        let got = dynamics.apply_cgd(g)?;
        if &got != want {
            return Ok(Outcome::fail("fixture differs", (g, want, got)));
        }
    }
    Ok(Outcome::pass(format!("{} fixtures", ex.fixtures.len())))
}

fn verdict_is_counterexample(v: MonotonicityVerdict) -> Outcome {
    match v {
        MonotonicityVerdict::Counterexample { smaller, larger } => Outcome {
            pass: true,
            detail: "counterexample found".to_owned(),
            witness: Some(format!("{smaller:?} ⊆ {larger:?}")),
        },
        other => Outcome::fail("no counterexample", other),
    }
}

pub fn local_rule_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let particle = particle_rule();
    let one_port = one_port_rule();
    let mut checks = vec![run(
        "rule.particle_figure_rows",
        "the particle spawns, moves right and bounces as in the three pictured evolutions",
        || {
            let dynamics = particle.dynamics();
            for (g, want) in particle_rows() {
                let got = dynamics.apply_cgd(&g)?;
                if got != want {
                    return Ok(Outcome::fail("row differs", (g, want, got)));
                }
            }
            Ok(Outcome::pass("3 rows, names preserved"))
        },
    )];
    let identity = identity_rule(particle_signature());
    let examples: Vec<(&str, Result<NamedExample, String>)> = vec![
        ("particle", Ok(particle.clone())),
        ("one_port", Ok(one_port.clone())),
        ("identity", identity.map_err(|e| e.to_string())),
    ];
    for (name, ex) in &examples {
        checks.push(run(
            &format!("rule.{name}.fixtures"),
            "every shipped fixture is reproduced",
            || fixtures_hold(ex.as_ref().map_err(|e| e.clone())?),
        ));
        checks.push(run(
            &format!("rule.{name}.conditions"),
            "the rule is equivariant, keeps disjoint disks disjoint, is bounded and is consistent",
            || {
                let ex = ex.as_ref().map_err(|e| e.clone())?;
                let rule = ex.rule.local_rule();
                let table = ex.rule.as_table().ok_or("table expected")?;
                let graphs = corpus(
                    &ex.signature,
                    &CorpusSpec::new(6),
                    cfg.seed,
                    cfg.rule_graphs,
                );
                let disks = disks_of(&graphs, rule.radius())?;
                rule_conditions(rule.as_ref(), &graphs, &disks, table.bound(), cfg.seed)
            },
        ));
    }
    for ex in [&particle, &one_port] {
        checks.push(run(
            &format!("rule.{}.not_monotonic", ex.name),
            "a disk included in another has an output not included in the other's output",
            || {
                let domain: Vec<PointedGraph> = enumerate_disks(&ex.signature, 1, cfg.cap)?
                    .into_iter()
                    .map(|d| d.into_disk())
                    .collect();
                Ok(verdict_is_counterexample(check_monotonic(
                    ex.rule.local_rule().as_ref(),
                    &domain,
                    cfg.budget,
                )?))
            },
        ));
    }
    checks.push(run(
        "rule.identity.monotonic",
        "the identity rule preserves inclusion of disks",
        || {
            let ex = identity_rule(particle_signature())?;
            let domain: Vec<PointedGraph> = enumerate_disks(&ex.signature, 0, cfg.cap)?
                .into_iter()
                .map(|d| d.into_disk())
                .collect();
            let v = check_monotonic(ex.rule.local_rule().as_ref(), &domain, cfg.budget)?;
            Ok(if v.is_monotonic() {
                Outcome::pass(format!("{v:?}"))
            } else {
                Outcome::fail("identity is not monotonic", v)
            })
        },
    ));
    checks
}

// -------------------------------------------------------------------- kan

fn extended_spec(max_vertices: usize) -> CorpusSpec {
    CorpusSpec::new(max_vertices).with_atom_budget(24)
}

fn kan_matches_cgd(dynamics: &Dynamics, graphs: &[Graph], cap: usize) -> CheckResult {
    let mut nonempty = 0;
    for g in graphs {
        let cgd = dynamics.apply_cgd(g)?;
        let kan = dynamics.apply_kan_with(Default::default(), g, cap)?;
        if cgd != kan {
            return Ok(Outcome::fail("Kan extension differs", (g, cgd, kan)));
        }
        nonempty += usize::from(!cgd.is_empty());
    }
    Ok(Outcome::pass(format!(
        "{} graphs, {nonempty} with non-empty image",
        graphs.len()
    )))
}

pub fn kan_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mono = monotonic_particle_rule();
    let enc = Encoding::new(particle_signature()).expect("extensible");
    let graphs = encoded_corpus(&enc, &extended_spec(8), cfg.seed, cfg.kan_graphs);
    let f_prime = mono.dynamics();
    let induced = Dynamics::new(induced_rule(&f_prime));
    let mut checks = vec![
        run(
            "kan.monotonic_particle",
            "for a monotonic rule the Kan extension over all sub-disks equals the dynamics",
            || kan_matches_cgd(&f_prime, &graphs, cfg.cap),
        ),
        run(
            "kan.induced_monotonic_particle",
            "the same holds for the rule induced by the monotonic dynamics",
            || kan_matches_cgd(&induced, &graphs, cfg.cap),
        ),
    ];
    for ex in [one_port_rule(), particle_rule()] {
        checks.push(run(
            &format!("kan.{}.diverges", ex.name),
            "for a non-monotonic rule the Kan extension is undefined or differs from the dynamics somewhere",
            || {
                let dynamics = ex.dynamics();
                let graphs = corpus(&ex.signature, &CorpusSpec::new(6), cfg.seed, cfg.rule_graphs);
                for g in &graphs {
                    let cgd = dynamics.apply_cgd(g)?;
                    match dynamics.apply_kan_with(Default::default(), g, cfg.cap) {
                        Err(e) => {
                            return Ok(Outcome {
                                pass: true,
                                detail: format!("Kan undefined: {e}"),
                                witness: Some(format!("{g:?}")),
                            })
                        }
                        Ok(kan) if kan != cgd => {
                            return Ok(Outcome {
                                pass: true,
                                detail: "Kan differs".to_owned(),
                                witness: Some(format!("{g:?}: {cgd:?} vs {kan:?}")),
                            })
                        }
                        Ok(_) => {}
                    }
                }
                Ok(Outcome::fail("Kan agrees everywhere", graphs.len()))
            },
        ));
    }
    checks.push(run(
        "kan.induced_rule_theorem",
        "the rule taking a disk to the dynamics of the disk generates the same dynamics and is monotonic",
        || {
            let identity = identity_rule(particle_signature())?.dynamics();
            let plain = corpus(&particle_signature(), &CorpusSpec::new(6), cfg.seed, cfg.rule_graphs);
            let cases: [(&str, &Dynamics, &[Graph]); 2] =
                [("identity", &identity, &plain), ("monotonic_particle", &f_prime, &graphs)];
            let mut detail = Vec::new();
            for (name, dynamics, graphs) in cases {
                let domain = disks_of(graphs, dynamics.radius())?;
                if !check_monotonic(dynamics.rule().as_ref(), &domain, cfg.budget)?.is_monotonic() {
                    return Ok(Outcome::fail("base rule not monotonic", name));
                }
                let induced = Dynamics::new(induced_rule(dynamics));
                for g in graphs {
                    if induced.apply_cgd(g)? != dynamics.apply_cgd(g)? {
                        return Ok(Outcome::fail("induced dynamics differs", (name, g)));
                    }
                }
                let v = check_monotonic(induced.rule().as_ref(), &domain, cfg.budget)?;
                if !v.is_monotonic() {
                    return Ok(Outcome::fail("induced rule not monotonic", (name, v)));
                }
                detail.push(format!("{name}: {} graphs, {} disks", graphs.len(), domain.len()));
            }
            Ok(Outcome::pass(detail.join("; ")))
        },
    ));
    checks
}

// ------------------------------------------------------------ monotonizer

pub fn monotonizer_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let particle = particle_rule();
    let mono = monotonic_particle_rule();
    let enc = Encoding::new(particle_signature()).expect("extensible");
    let mut checks = vec![
        run(
            "mono.figure_rows_encoded",
            "the monotonic simulation maps each encoded input row to the encoded output row",
            || {
                let base = particle.dynamics();
                let f_prime = mono.dynamics();
                for (g, h) in particle_rows() {
                    let s = simulate(&base, &f_prime, &g)?;
                    if s.simulated != enc.encode_graph(&h) || !s.holds() {
                        return Ok(Outcome::fail("row differs", (g, s.simulated)));
                    }
                }
                Ok(Outcome::pass("3 rows"))
            },
        ),
        run(
            "mono.coherence_classes",
            "a total graph, a coherent partial graph and an incoherent graph are told apart",
            || {
                let [total, partial, incoherent] = coherence_classes();
                let ok = enc.decode_graph(&total).is_ok()
                    && enc.coh(&partial) == partial
                    && enc.decode_graph(&partial).is_err()
                    && enc.coh(&incoherent) == partial
                    && partial.is_subgraph(&total)
                    && partial.is_subgraph(&incoherent);
                Ok(Outcome::from_bool(
                    ok,
                    "total / coherent partial / incoherent",
                ))
            },
        ),
    ];
    for ex in [particle_rule(), one_port_rule()] {
        checks.push(run(
            &format!("mono.simulation.{}", ex.name),
            "the monotonic dynamics on an encoded graph gives the encoding of the original dynamics",
            || {
                let table = ex.rule.as_table().ok_or("table expected")?.clone();
                let base = ex.dynamics();
                let f_prime = Dynamics::new(MonotonizedRule::from_table(table)?);
                let graphs = corpus(&ex.signature, &CorpusSpec::new(6), cfg.seed, cfg.simulation_graphs);
                for g in &graphs {
                    let s = simulate(&base, &f_prime, g)?;
                    if !s.holds() {
                        return Ok(Outcome::fail("simulation differs", (g, s.simulated, s.expected)));
                    }
                }
                Ok(Outcome::pass(format!("{} graphs", graphs.len())))
            },
        ));
    }
    let rule = mono.rule.local_rule();
    let (graphs, disks) = fprime_sample(&enc, rule.radius(), cfg);
    checks.push(run(
        "mono.fprime_local_rule",
        "the simulating rule is equivariant, keeps disjoint disks disjoint, is bounded and is consistent",
        || {
            let base_bound = particle.rule.as_table().ok_or("table expected")?.bound();
            let bound = base_bound * (1 + particle_signature().pi().len());
            rule_conditions(rule.as_ref(), &graphs, &disks, bound, cfg.seed)
        },
    ));
    checks.push(run(
        "mono.fprime_monotonic",
        "the simulating rule preserves inclusion of disks",
        || {
            let v = check_monotonic(rule.as_ref(), &disks, cfg.budget)?;
            Ok(match v {
                MonotonicityVerdict::Counterexample { .. } => Outcome::fail("counterexample", v),
                other => Outcome::pass(format!("{} disks: {other:?}", disks.len())),
            })
        },
    ));
    checks
}

/// Radius-`r` disks of an encoded corpus, until `cfg.fprime_disks` disks.
fn fprime_sample(enc: &Encoding, r: usize, cfg: &VerifyConfig) -> (Vec<Graph>, Vec<PointedGraph>) {
    let mut graphs = Vec::new();
    let mut disks = Vec::new();
    let mut seed = cfg.seed;
    while disks.len() < cfg.fprime_disks {
        for g in encoded_corpus(enc, &extended_spec(6), seed, 20) {
            for v in g.vertices() {
                if disks.len() < cfg.fprime_disks {
                    disks.push(extract_disk(&g, v, r).expect("vertex of g"));
                }
            }
            graphs.push(g);
        }
        seed = seed.wrapping_add(1);
    }
    (graphs, disks)
}

// --------------------------------------------------------------- category

const DIAGRAM_CHECKS: [(&str, &str); 4] = [
    (
        "category.comma_nonempty_connected",
        "the comma category of disk occurrences is non-empty and connected through the empty disk",
    ),
    (
        "category.theta_cocone",
        "the components of θ commute with every morphism of the comma category",
    ),
    (
        "category.theta_universal",
        "every generated cocone factors through θ by exactly one morphism",
    ),
    (
        "category.colimit_is_dynamics",
        "the apex of the colimit is the image of the graph under the dynamics",
    ),
];

/// Comma categories up to this many objects are also checked against
/// every morphism, not only the generators.
const SMALL_DIAGRAM: usize = 150;

struct DiagramRun {
    results: [(Result<Outcome, String>, Duration); 4],
    objects: usize,
    candidates: usize,
}

/// The four comma-category checks on one graph, in [`DIAGRAM_CHECKS`]
/// order.
fn diagram_run(
    dynamics: &Dynamics,
    g: &Graph,
    cfg: &VerifyConfig,
    rng: &mut impl Rng,
) -> DiagramRun {
    fn timed(f: impl FnOnce() -> CheckResult) -> (Result<Outcome, String>, Duration) {
        let start = Instant::now();
        let r = f().map_err(|e| e.to_string());
        (r, start.elapsed())
    }
    let start = Instant::now();
    let built = CommaDiagram::new(dynamics, g, cfg.cap)
        .map_err(|e| e.to_string())
        .and_then(|d| d.theta().map(|t| (d, t)).map_err(|e| e.to_string()));
    let setup = start.elapsed();
    let (d, theta) = match built {
        Ok(x) => x,
        Err(e) => {
            return DiagramRun {
                results: std::array::from_fn(|_| (Err(e.clone()), setup)),
                objects: 0,
                candidates: 0,
            }
        }
    };
    let small = d.objects().len() <= SMALL_DIAGRAM;
    let all = if small { d.all_morphisms() } else { Vec::new() };
    let gens = d.generators();
    let (connected, t0) = timed(|| {
        let ok =
            !d.objects().is_empty() && d.is_connected(&gens) && (!small || d.is_connected(&all));
        Ok(if ok {
            Outcome::pass("")
        } else {
            Outcome::fail("not connected", g)
        })
    });
    let (cocone, t1) = timed(|| {
        let ok = d.check_cocone(&theta, &gens, &derived_conjugate)?
            && (!small || d.check_cocone(&theta, &all, &derived_conjugate)?);
        Ok(if ok {
            Outcome::pass("")
        } else {
            Outcome::fail("θ does not commute", g)
        })
    });
    let mut candidates = 0;
    let (universal, t2) = timed(|| {
        for xi in std::iter::once(theta.clone()).chain(d.candidate_cocones(
            &theta,
            cfg.candidate_cocones,
            rng,
        )) {
            candidates += 1;
            if !d.check_cocone(&xi, &gens, &derived_conjugate)? {
                return Ok(Outcome::fail("candidate is not a cocone", (g, &xi.apex)));
            }
            match d.factor(&theta, &xi) {
                Factorization::Unique(_) => {}
                other => return Ok(Outcome::fail("no unique factorization", (g, other))),
            }
        }
        // a cocone whose components disagree must not factor
        if let Some(broken) = perturbed(&theta, rng) {
            if matches!(d.factor(&theta, &broken), Factorization::Unique(_)) {
                return Ok(Outcome::fail("perturbed cocone factors", g));
            }
        }
        Ok(Outcome::pass(""))
    });
    let (apex, t3) = timed(|| {
        let apex = d.colimit_apex(&theta)?;
        Ok(if apex == *d.image() {
            Outcome::pass("")
        } else {
            Outcome::fail("apex differs", (g, apex))
        })
    });
    DiagramRun {
        results: [
            (connected, setup + t0),
            (cocone, t1),
            (universal, t2),
            (apex, t3),
        ],
        objects: d.objects().len(),
        candidates,
    }
}

/// Folds per-graph results into one [`Check`].
struct Tally {
    id: &'static str,
    quote: &'static str,
    graphs: usize,
    elapsed: Duration,
    failure: Option<(String, Option<String>)>,
}

impl Tally {
    fn new((id, quote): (&'static str, &'static str)) -> Self {
        Tally {
            id,
            quote,
            graphs: 0,
            elapsed: Duration::ZERO,
            failure: None,
        }
    }

    fn add(&mut self, (result, elapsed): (Result<Outcome, String>, Duration)) {
        self.elapsed += elapsed;
        if self.failure.is_some() {
            return;
        }
        match result {
            Ok(o) if o.pass => self.graphs += 1,
            Ok(o) => self.failure = Some((o.detail, o.witness)),
            Err(e) => self.failure = Some(("error".to_owned(), Some(e))),
        }
    }

    fn finish(self, detail: String) -> Check {
        let (status, detail, witness) = match self.failure {
            None => (Status::Pass, detail, None),
            Some((d, w)) => (Status::Fail, d, w),
        };
        Check {
            proposition_id: self.id.to_owned(),
            anchor_quote: self.quote.to_owned(),
            status,
            witness,
            detail,
            elapsed: self.elapsed,
        }
    }
}

pub fn category_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mono = monotonic_particle_rule();
    let f_prime = mono.dynamics();
    let enc = Encoding::new(particle_signature()).expect("extensible");
    let graphs = encoded_corpus(&enc, &CorpusSpec::new(5), cfg.seed, cfg.category_graphs);
    let mut tallies = DIAGRAM_CHECKS.map(Tally::new);
    let mut cocone_rng = rng(cfg.seed);
    let (mut objects, mut candidates) = (0, 0);
    for g in &graphs {
        let run = diagram_run(&f_prime, g, cfg, &mut cocone_rng);
        objects += run.objects;
        candidates += run.candidates;
        for (t, r) in tallies.iter_mut().zip(run.results) {
            t.add(r);
        }
    }
    let n = graphs.len();
    let [connected, cocone, universal, apex] = tallies;
    let mut checks = vec![
        connected.finish(format!("{n} graphs, {objects} comma objects")),
        cocone.finish(format!("{n} graphs")),
        universal.finish(format!("{candidates} candidate cocones over {n} graphs")),
        apex.finish(format!("{n} graphs")),
    ];
    checks.push(run(
        "category.laws",
        "subgraph isomorphisms compose associatively with identities, and invertible ones are renamings",
        || {
            let sig = lattice_signature();
            let mut rng = rng(cfg.seed);
            let mut family = Vec::new();
            for g in corpus(&sig, &CorpusSpec::new(3), cfg.seed, 6) {
                family.push(random_renaming(&g, 1, &mut rng).apply_graph(&g));
                for v in g.vertices() {
                    let rest: BTreeSet<VertexName> = g.vertices().iter().filter(|w| *w != v).cloned().collect();
                    family.push(g.induced(&rest));
                }
                family.push(g);
            }
            let mut triples = 0;
            for a in &family {
                for b in &family {
                    for m in enumerate_morphisms(a, b) {
                        if compose(&Morphism::identity(b), &m)? != m || compose(&m, &Morphism::identity(a))? != m {
                            return Ok(Outcome::fail("identity law", &m));
                        }
                        if m.is_iso() != m.inverse().is_some() {
                            return Ok(Outcome::fail("invertibility differs from isomorphism", &m));
                        }
                        if let Some(inv) = m.inverse() {
                            if m.map().apply_graph(a).as_ref() != Some(b) || compose(&inv, &m)? != Morphism::identity(a) {
                                return Ok(Outcome::fail("iso is not a renaming", &m));
                            }
                        }
                        for c in &family {
                            for n in enumerate_morphisms(b, c) {
                                for p in enumerate_morphisms(c, a).into_iter().take(4) {
                                    triples += 1;
                                    let left = compose(&p, &compose(&n, &m)?)?;
                                    let right = compose(&compose(&p, &n)?, &m)?;
                                    if left != right {
                                        return Ok(Outcome::fail("associativity", (&m, &n, &p)));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Ok(Outcome::pass(format!("{triples} composable triples")))
        },
    ));
    checks.push(run(
        "category.conjugate_homomorphism",
        "conjugation sends the identity to the identity and composites to composites, and commutes with the dynamics",
        || {
            let mut rng = rng(cfg.seed);
            let mut detail = Vec::new();
            let plain = corpus(&particle_signature(), &CorpusSpec::new(6), cfg.seed, 20);
            for (name, dynamics, corpus) in [
                ("particle", particle_rule().dynamics(), plain),
                ("monotonic_particle", f_prime.clone(), graphs.clone()),
            ] {
                let samples: Vec<(Renaming, Renaming)> = (0..cfg.renaming_pairs)
                    .map(|k| {
                        let g = &corpus[k % corpus.len()];
                        (random_renaming(g, 2, &mut rng), random_renaming(g, 2, &mut rng))
                    })
                    .collect();
                let swap = Renaming::swap("a", "b");
                let mut samples_with_swap = samples.clone();
                samples_with_swap.push((swap.clone(), swap));
                if !check_fbar_homomorphism(&dynamics, &samples_with_swap, &corpus)? {
                    return Ok(Outcome::fail("homomorphism fails", name));
                }
                detail.push(format!("{name}: {} pairs on {} graphs", samples_with_swap.len(), corpus.len()));
            }
            Ok(Outcome::pass(detail.join("; ")))
        },
    ));
    checks
}

// ------------------------------------------------------------- user input

/// Conditions (1)–(4) for an arbitrary rule on a seeded corpus over its
/// signature, plus a monotonicity verdict on the corpus disks.
pub fn user_rule_checks(rule: &ExampleRule, cfg: &VerifyConfig) -> Vec<Check> {
    let local = rule.local_rule();
    let sig = local.signature().clone();
    let graphs = match rule {
        ExampleRule::Table(_) => corpus(&sig, &CorpusSpec::new(6), cfg.seed, cfg.rule_graphs),
        ExampleRule::Monotonized(m) => {
            encoded_corpus(m.encoding(), &extended_spec(6), cfg.seed, cfg.rule_graphs)
        }
    };
    let disks = disks_of(&graphs, local.radius());
    let conditions = run(
        "rule.conditions",
        "the rule is equivariant, keeps disjoint disks disjoint, is bounded and is consistent",
        || {
            let disks = disks.as_ref().map_err(|e| e.to_string())?;
            let bound = match rule {
                ExampleRule::Table(t) => t.bound(),
                ExampleRule::Monotonized(m) => {
                    let base = m.base_table().ok_or("monotonized rule without a table")?;
                    base.bound() * (1 + base.signature().pi().len())
                }
            };
            rule_conditions(local.as_ref(), &graphs, disks, bound, cfg.seed)
        },
    );
    let monotonic = run(
        "rule.monotonic",
        "the rule preserves inclusion of disks",
        || {
            let disks = disks.as_ref().map_err(|e| e.to_string())?;
            let v = check_monotonic(local.as_ref(), disks, cfg.budget)?;
            Ok(match v {
                MonotonicityVerdict::Counterexample { .. } => Outcome::fail("counterexample", v),
                other => Outcome::pass(format!("{} disks: {other:?}", disks.len())),
            })
        },
    );
    vec![conditions, monotonic]
}

/// The category checks on one graph.
pub fn graph_category_checks(dynamics: &Dynamics, g: &Graph, cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng(cfg.seed);
    let outcome = diagram_run(dynamics, g, cfg, &mut rng);
    let details = [
        format!("{} objects", outcome.objects),
        String::new(),
        format!("{} candidate cocones", outcome.candidates),
        String::new(),
    ];
    let mut checks: Vec<Check> = DIAGRAM_CHECKS
        .into_iter()
        .zip(outcome.results)
        .zip(details)
        .map(|((ids, r), detail)| {
            let mut t = Tally::new(ids);
            t.add(r);
            t.finish(detail)
        })
        .collect();
    checks.push(run(
        "category.conjugate_homomorphism",
        "conjugation sends the identity to the identity and composites to composites, and commutes with the dynamics",
        || {
            let samples: Vec<(Renaming, Renaming)> = (0..cfg.renaming_pairs)
                .map(|_| (random_renaming(g, 2, &mut rng), random_renaming(g, 2, &mut rng)))
                .collect();
            let ok = check_fbar_homomorphism(dynamics, &samples, std::slice::from_ref(g))?;
            Ok(Outcome::from_bool(ok, format!("{} renaming pairs", samples.len())))
        },
    ));
    checks
}

/// θ with one component's map rotated, if some component has two
/// vertices to rotate.
fn perturbed(
    theta: &crate::category::Cocone,
    rng: &mut impl Rng,
) -> Option<crate::category::Cocone> {
    let candidates: Vec<usize> = (0..theta.components.len())
        .filter(|&i| theta.components[i].map().len() >= 2)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let i = candidates[rng.gen_range(0..candidates.len())];
    let c = &theta.components[i];
    let pairs: Vec<(VertexName, VertexName)> = c
        .map()
        .iter()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    let n = pairs.len();
    let map = crate::graph::NameMap::from_pairs(
        pairs
            .iter()
            .enumerate()
            .map(|(k, (a, _))| (a.clone(), pairs[(k + 1) % n].1.clone())),
    )
    .ok()?;
    let mut out = theta.clone();
    out.components[i] =
        crate::category::Morphism::new(c.source().clone(), c.target().clone(), map).ok()?;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matchings_and_iso_classes() {
        let sig = lattice_signature();
        let slots: Vec<Endpoint> = ["a", "b"]
            .iter()
            .flat_map(|v| ["l", "r"].map(|p| Endpoint::new(*v, p)))
            .collect();
        assert_eq!(perfect_matchings(&slots).len(), 3);
        // two vertices: both self-looped, l-l with r-r, or l-r with r-l
        assert_eq!(maximal_graphs(&sig, 1).len(), 1);
        assert_eq!(maximal_graphs(&sig, 2).len(), 3);
    }

    #[test]
    fn masks_are_downward_closed() {
        let sig = lattice_signature();
        let m = &maximal_graphs(&sig, 1)[0];
        // vertex absent: 1; present: label or not × loop or not
        assert_eq!(subgraph_masks(m).len(), 5);
    }

    #[test]
    fn quick_all_passes() {
        let report = run_suite(Suite::All, &VerifyConfig::quick(7));
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(
            report.to_json(),
            run_suite(Suite::All, &VerifyConfig::quick(7)).to_json()
        );
    }
}
