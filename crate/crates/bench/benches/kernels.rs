use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use apsieve_bench::curve_stage_tuples;
use apsieve_core::curves::{by_name, delta_candidates, quadruple_quartic, rank0_points, SearchOptions};
use apsieve_core::search::{search_box, BCondition, SearchSpec};
use apsieve_core::sieve::{auto_eliminate, default_primes, survives_mod_p};
use apsieve_core::tuples::generate_k5_candidates;

fn sieve(c: &mut Criterion) {
    let tuples = curve_stage_tuples();
    let candidates = generate_k5_candidates();
    let primes = default_primes();
    c.bench_function("sieve/one tuple mod 31", |b| b.iter(|| survives_mod_p(black_box(&tuples[4]), 31)));
    c.bench_function("sieve/880 candidates", |b| b.iter(|| auto_eliminate(black_box(&candidates), &primes)));
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let spec = SearchSpec::new(5, (-500, 500), (2, 60), BCondition::Eq(5)).unwrap();
    g.bench_function("k5 eq:5 box 1001x59", |b| b.iter(|| search_box(black_box(&spec))));
    let spec = SearchSpec::new(4, (1, 2000), (1, 20), BCondition::One).unwrap();
    g.bench_function("k4 b=1 box 2000x20", |b| b.iter(|| search_box(black_box(&spec))));
    g.finish();
}

fn rank0(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank0");
    g.sample_size(10);
    let t = &curve_stage_tuples()[0];
    let q = quadruple_quartic(t, [0, 1, 2, 3]).unwrap();
    for h in [100u64, 1000] {
        let opts = SearchOptions { height: h, ..SearchOptions::default() };
        g.bench_function(format!("points height {h}"), |b| b.iter(|| rank0_points(black_box(&q), &opts)));
    }
    g.finish();
}

fn delta(c: &mut Criterion) {
    let mut g = c.benchmark_group("delta");
    g.sample_size(10);
    for name in ["k7-a", "k5-a"] {
        let fam = by_name(name).unwrap().family().unwrap();
        g.bench_function(name, |b| b.iter(|| delta_candidates(black_box(&fam))));
    }
    g.finish();
}

criterion_group!(benches, sieve, search, rank0, delta);
criterion_main!(benches);
