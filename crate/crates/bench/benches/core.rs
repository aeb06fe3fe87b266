use criterion::{black_box, criterion_group, criterion_main, Criterion};
use mertens_core::arith::{sieve_mu, Tables};
use mertens_core::bounds::{bootstrap, Context};
use mertens_core::quadrature::{mellin_numeric, TailEnvelope};
use mertens_core::special::{mellin_h1_closed, zeta_real};
use mertens_core::verify::{verify_range, Predicate, VerifyOptions};
use mertens_core::weights::{eval_h, h1, WeightSpec};
use std::sync::Arc;

fn sieve(c: &mut Criterion) {
    c.bench_function("sieve 1e6", |b| b.iter(|| sieve_mu(black_box(1_000_000)).unwrap()));
}

fn verify(c: &mut Criterion) {
    let t = Tables::new(sieve_mu(5_000_000).unwrap());
    let opts = VerifyOptions { jobs: Some(1) };
    c.bench_function("verify m4343 [2160605, 5e6)", |b| {
        b.iter(|| verify_range(&t, &Predicate::m4343(), 2_160_605.0, 5e6, &opts).unwrap())
    });
    c.bench_function("verify mlog [120561, 230000)", |b| {
        b.iter(|| verify_range(&t, &Predicate::mlog(), 120_561.0, 230_000.0, &opts).unwrap())
    });
}

fn special(c: &mut Criterion) {
    c.bench_function("zeta(0.5)", |b| b.iter(|| zeta_real(black_box(0.5)).unwrap()));
    c.bench_function("H1 closed form at 0.5", |b| b.iter(|| mellin_h1_closed(black_box(0.5)).unwrap()));
    c.bench_function("H1 lattice sum at t = 1e4", |b| b.iter(|| eval_h(&h1(), black_box(10_000.5)).unwrap()));
}

fn mellin(c: &mut Criterion) {
    let w = WeightSpec::h1();
    let mut g = c.benchmark_group("mellin");
    g.sample_size(10);
    g.bench_function("H1 bracket s = 0.5, X = 1e4", |b| {
        b.iter(|| mellin_numeric(&w, 0.5, 1e4, &TailEnvelope::Periodic).unwrap())
    });
    g.finish();
}

fn chains(c: &mut Criterion) {
    let t = Arc::new(Tables::new(sieve_mu(5_000_000).unwrap()));
    let mut g = c.benchmark_group("bootstrap");
    g.sample_size(10);
    for chain in ["const", "log", "log2", "mcheck"] {
        g.bench_function(chain, |b| b.iter(|| bootstrap(chain, &mut Context::with_tables(t.clone())).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sieve, verify, special, mellin, chains);
criterion_main!(benches);
