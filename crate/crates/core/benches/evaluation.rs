use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cgdlab::corpus::vertex_name;
use cgdlab::dynamics::Dynamics;
use cgdlab::exec::Strategy;
use cgdlab::graph::Graph;
use cgdlab::library::{monotonic_particle_rule, particle_rule, particle_signature, RIGHT};
use cgdlab::monotonizer::Encoding;

fn strategies() -> Vec<(&'static str, Strategy)> {
    let mut out = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Strategy::Parallel));
    out
}

/// A path of `n` vertices with a right-going particle on every third one.
fn path(n: usize) -> Graph {
    let mut b = Graph::builder(&particle_signature());
    for k in 0..n {
        b = if k % 3 == 0 {
            b.labeled(vertex_name(k), RIGHT)
        } else {
            b.vertex(vertex_name(k))
        };
        if k > 0 {
            b = b.edge((vertex_name(k - 1), "r"), (vertex_name(k), "l"));
        }
    }
    b.build().expect("path")
}

fn apply_cgd(c: &mut Criterion) {
    let dynamics = particle_rule().dynamics();
    let mut group = c.benchmark_group("apply_cgd");
    for n in [64, 512] {
        let g = path(n);
        for (name, s) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| dynamics.apply_cgd_with(s, g).expect("consistent"))
            });
        }
    }
    group.finish();
}

fn monotonic(c: &mut Criterion) {
    let dynamics: Dynamics = monotonic_particle_rule().dynamics();
    let enc = Encoding::new(particle_signature()).expect("extensible");
    let mut group = c.benchmark_group("monotonic_particle");
    group.sample_size(10);
    let g = enc.encode_graph(&path(24));
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::new(format!("cgd/{name}"), 24), &g, |b, g| {
            b.iter(|| dynamics.apply_cgd_with(s, g).expect("consistent"))
        });
    }
    let small = enc.encode_graph(&path(3));
    for (name, s) in strategies() {
        group.bench_with_input(
            BenchmarkId::new(format!("kan/{name}"), 3),
            &small,
            |b, g| b.iter(|| dynamics.apply_kan_with(s, g, 1_000_000).expect("defined")),
        );
    }
    group.finish();
}

criterion_group!(benches, apply_cgd, monotonic);
criterion_main!(benches);
