use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ospq_bench::random_words;
use ospq_core::ospclassic::verify_classical;
use ospq_core::uqosp::{catalog, verify_catalog};
use ospq_core::walgebra::{canonical_form, normal_order, Rewriter, Strategy};

fn rewriting(c: &mut Criterion) {
    let words = random_words(3, 10, 64, 7);
    let mut g = c.benchmark_group("rewrite");
    g.bench_function("normal_order", |b| b.iter(|| words.iter().map(|w| normal_order(black_box(w), 3).unwrap().len()).sum::<usize>()));
    g.bench_function("canonical_form", |b| b.iter(|| words.iter().map(|w| canonical_form(black_box(w), 3).unwrap().len()).sum::<usize>()));
    g.bench_function("word_rewriter", |b| {
        b.iter(|| words.iter().map(|w| Rewriter::new(Strategy::Leftmost).normal_form(black_box(w), 3).unwrap().len()).sum::<usize>())
    });
    g.finish();
}

fn catalogs(c: &mut Criterion) {
    let mut g = c.benchmark_group("realize_catalog");
    g.sample_size(10);
    for n in 1..=3 {
        let inst = catalog(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| b.iter(|| verify_catalog(inst, n, false).unwrap().len()));
    }
    g.finish();
}

fn classical(c: &mut Criterion) {
    let mut g = c.benchmark_group("classical");
    g.sample_size(10);
    for n in 1..=2 {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| verify_classical(n).unwrap().len()));
    }
    g.finish();
}

criterion_group!(benches, rewriting, catalogs, classical);
criterion_main!(benches);
