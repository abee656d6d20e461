//! One PASS/FAIL line per acceptance criterion, at full corpus sizes.
//!
//! Run with `cargo test -p cgdlab --test acceptance -- --nocapture`.

use std::time::Duration;

use cgdlab::verify::{run_suite, Check, Report, Suite, VerifyConfig};

const SEED: u64 = 7;

struct Criterion {
    number: usize,
    title: &'static str,
    checks: &'static [&'static str],
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "particle rule reproduces the three pictured rows",
        checks: &["rule.particle_figure_rows"],
        limit: Some(Duration::from_secs(1)),
    },
    Criterion {
        number: 2,
        title: "monotonic simulation reproduces the encoded rows",
        checks: &["mono.figure_rows_encoded", "mono.coherence_classes"],
        limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        number: 3,
        title: "simulation law on 200 graphs for particle and one_port",
        checks: &["mono.simulation.particle", "mono.simulation.one_port"],
        limit: Some(Duration::from_secs(300)),
    },
    Criterion {
        number: 4,
        title: "Kan extension equals the dynamics for monotonic rules",
        checks: &["kan.monotonic_particle", "kan.induced_monotonic_particle"],
        limit: None,
    },
    Criterion {
        number: 5,
        title: "non-monotonic rules have counterexamples and Kan diverges",
        checks: &[
            "rule.particle.not_monotonic",
            "rule.one_port.not_monotonic",
            "kan.one_port.diverges",
        ],
        limit: None,
    },
    Criterion {
        number: 6,
        title: "induced rule generates the same dynamics and is monotonic",
        checks: &["kan.induced_rule_theorem"],
        limit: None,
    },
    Criterion {
        number: 7,
        title: "union and intersection are exact join and meet",
        checks: &[
            "lattice.union_intersection_exact",
            "lattice.no_upper_bound_on_conflict",
        ],
        limit: None,
    },
    Criterion {
        number: 8,
        title: "extracted disks are maximum and commute with encoding",
        checks: &["disk.extracted_is_maximum", "disk.encoding_commutes"],
        limit: None,
    },
    Criterion {
        number: 9,
        title: "simulating rule is a monotonic local rule",
        checks: &["mono.fprime_local_rule", "mono.fprime_monotonic"],
        limit: None,
    },
    Criterion {
        number: 10,
        title: "comma category, universal cocone and colimit apex",
        checks: &[
            "category.comma_nonempty_connected",
            "category.theta_cocone",
            "category.theta_universal",
            "category.colimit_is_dynamics",
            "category.laws",
        ],
        limit: Some(Duration::from_secs(600)),
    },
    Criterion {
        number: 11,
        title: "conjugation is a homomorphism commuting with the dynamics",
        checks: &["category.conjugate_homomorphism"],
        limit: None,
    },
];

fn find<'a>(reports: &'a [Report], id: &str) -> Option<&'a Check> {
    reports.iter().find_map(|r| r.check(id))
}

#[test]
fn acceptance() {
    let cfg = VerifyConfig::full(SEED);
    let reports: Vec<Report> = [
        Suite::Lattice,
        Suite::Disks,
        Suite::LocalRule,
        Suite::Kan,
        Suite::Monotonizer,
        Suite::Category,
    ]
    .into_iter()
    .map(|s| run_suite(s, &cfg))
    .collect();

    let mut failed = Vec::new();
    for c in CRITERIA {
        let checks: Vec<Option<&Check>> = c.checks.iter().map(|id| find(&reports, id)).collect();
        let elapsed: Duration = checks.iter().flatten().map(|k| k.elapsed).sum();
        let mut problems = Vec::new();
        for (id, check) in c.checks.iter().zip(&checks) {
            match check {
                None => problems.push(format!("{id} missing")),
                Some(k) if !k.passed() => {
                    problems.push(format!("{id}: {} {:?}", k.detail, k.witness))
                }
                Some(_) => {}
            }
        }
        if let Some(limit) = c.limit {
            if elapsed > limit {
                problems.push(format!("took {elapsed:?}, limit {limit:?}"));
            }
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}: {} ({elapsed:.2?})",
            c.number, c.title
        );
        for k in checks.iter().flatten() {
            println!("    {} {:?}: {}", k.proposition_id, k.status, k.detail);
        }
        for p in &problems {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
