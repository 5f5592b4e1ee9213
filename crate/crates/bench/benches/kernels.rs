use std::hint::black_box;

use brownian_polymer::environment::BrownianLattice;
use brownian_polymer::freeenergy::free_energy;
use brownian_polymer::polymer::{log_partition_dp, lpp_dp};
use brownian_polymer::queue::tandem;
use brownian_polymer::rmt::{largest_eigenvalue, sample_gue_tridiag};
use brownian_polymer::specialfn::{digamma, inv_trigamma, trigamma};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("specialfn");
    for x in [0.01, 3.7, 1e4] {
        g.bench_with_input(BenchmarkId::new("digamma", x), &x, |b, &x| {
            b.iter(|| digamma(black_box(x)))
        });
        g.bench_with_input(BenchmarkId::new("trigamma", x), &x, |b, &x| {
            b.iter(|| trigamma(black_box(x)))
        });
    }
    g.bench_function("inv_trigamma", |b| b.iter(|| inv_trigamma(black_box(2.5))));
    g.bench_function("free_energy", |b| b.iter(|| free_energy(black_box(1.0))));
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer");
    g.sample_size(20);
    for n in [16usize, 64] {
        let lat = BrownianLattice::sample(n, 0.0, n as f64, 0.025, 1, 0.0).unwrap();
        g.bench_with_input(BenchmarkId::new("log_partition_dp", n), &lat, |b, lat| {
            b.iter(|| log_partition_dp(lat, 1.0, n))
        });
        g.bench_with_input(BenchmarkId::new("lpp_dp", n), &lat, |b, lat| {
            b.iter(|| lpp_dp(lat, n, n as f64))
        });
    }
    g.finish();
}

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("rmt");
    for n in [16usize, 64, 256] {
        let t = sample_gue_tridiag(n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("largest_eigenvalue", n), &t, |b, t| {
            b.iter(|| largest_eigenvalue(t))
        });
    }
    g.finish();
}

fn queue(c: &mut Criterion) {
    let mut g = c.benchmark_group("queue");
    g.sample_size(10);
    g.bench_function("tandem m=1 n=8", |b| {
        b.iter(|| tandem(1.0, 8, 86.0, 0.01, black_box(3)))
    });
    g.finish();
}

criterion_group!(benches, special, transfer, eigen, queue);
criterion_main!(benches);
