//! End-to-end pipeline benchmarks on the bundled corpus: exact factorization,
//! cone construction (viable set + double description), norm-ball assembly,
//! and the per-evaluation cost of the gauge distance.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crn_core::ball::norm_ball;
use crn_core::cones::build_cone;
use crn_core::corpus;
use crn_core::factorize::pnd_factorize;
use crn_core::network::parse_network;

fn bench_factorize(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    for (name, src) in corpus::corpus_sources() {
        let net = parse_network(&src).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| pnd_factorize(std::hint::black_box(&net.gamma)).unwrap())
        });
    }
    group.finish();
}

fn bench_build_cone(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_cone");
    for (name, src) in corpus::corpus_sources() {
        let net = parse_network(&src).unwrap();
        group.bench_function(name, |b| b.iter(|| build_cone(std::hint::black_box(&net)).unwrap()));
    }
    group.finish();
}

fn bench_norm_ball(c: &mut Criterion) {
    let mut group = c.benchmark_group("norm_ball");
    group.sample_size(20);
    for (name, src) in corpus::corpus_sources() {
        let net = parse_network(&src).unwrap();
        let cons = build_cone(&net).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| norm_ball(std::hint::black_box(&cons.cone), &net.gamma).unwrap())
        });
    }
    group.finish();
}

fn bench_gauge(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauge_distance");
    for (name, src) in corpus::corpus_sources() {
        let net = parse_network(&src).unwrap();
        let cons = build_cone(&net).unwrap();
        let ball = norm_ball(&cons.cone, &net.gamma).unwrap();
        let n = net.n_species();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // Pairs differing by a stoichiometric combination, so the distance is
        // defined; regenerated per batch to avoid measuring a single input.
        let gamma: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..net.n_reactions())
                    .map(|j| crn_core::rational::q_to_f64(net.gamma.get(i, j)))
                    .collect()
            })
            .collect();
        group.bench_function(name, |b| {
            b.iter_batched(
                || {
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..3.0)).collect();
                    let w: Vec<f64> =
                        (0..net.n_reactions()).map(|_| rng.gen_range(-0.1..0.1)).collect();
                    let y: Vec<f64> = (0..n)
                        .map(|i| x[i] + gamma[i].iter().zip(&w).map(|(g, wj)| g * wj).sum::<f64>())
                        .collect();
                    (x, y)
                },
                |(x, y)| ball.distance(&x, &y).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_factorize, bench_build_cone, bench_norm_ball, bench_gauge);
criterion_main!(benches);
