use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symgc::safety::check_safety;
use symgc::semantics::{interpret_judgement, Options};
use symgc::solver::Solver;
use symgc::syntax::load;
use symgc_bench::{fixed_search, CORPUS};

fn model(c: &mut Criterion) {
    let mut g = c.benchmark_group("model");
    for (name, src) in CORPUS {
        let j = load(src).unwrap();
        g.bench_function(*name, |b| {
            b.iter(|| interpret_judgement(black_box(&j), Options::default()).unwrap())
        });
    }
    g.finish();
}

fn check(c: &mut Criterion) {
    let solver = Solver::default();
    let mut g = c.benchmark_group("check");
    for (name, src) in CORPUS {
        let s = interpret_judgement(&load(src).unwrap(), Options::default()).unwrap();
        g.bench_function(*name, |b| b.iter(|| check_safety(black_box(&s), &solver, 32)));
    }
    g.finish();
}

fn search_scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("fixed_search");
    for n in [2u32, 5, 10, 20] {
        let src = fixed_search(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &src, |b, src| {
            b.iter(|| {
                let s = interpret_judgement(&load(src).unwrap(), Options::default()).unwrap();
                check_safety(&s, &Solver::default(), 32)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, model, check, search_scaling);
criterion_main!(benches);
