use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rmcs_bench::{chain, negative_cycle};
use rmcs_core::{bundled, enumerate_equilibria, find_repair, run_stream, run_wf_stream, RepairPolicy, Selector};

fn examples(c: &mut Criterion) {
    let mut g = c.benchmark_group("examples");
    for name in ["stove", "scenario", "turing"] {
        let (m, cfg, st) = bundled::load(name).unwrap();
        g.bench_function(name, |b| b.iter(|| run_stream(&m, &cfg, &st, Selector::First).unwrap()));
    }
    let (m, cfg, st) = bundled::load("scenario_adjusted").unwrap();
    g.bench_function("scenario_adjusted_wfs", |b| b.iter(|| run_wf_stream(&m, &cfg, &st).unwrap()));
    let (m, cfg, st) = bundled::load("stove_no_next").unwrap();
    g.bench_function("stove_no_next_minimal_repair", |b| {
        b.iter(|| find_repair(&m, &cfg, &st, RepairPolicy::Minimal).unwrap())
    });
    g.finish();
}

fn scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("chain");
    for n in [4, 16, 64] {
        let (m, cfg, st) = chain(n, 8);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| run_stream(black_box(&m), &cfg, &st, Selector::First).unwrap())
        });
    }
    g.finish();
    let mut g = c.benchmark_group("negative_cycle");
    for n in [2, 6, 10] {
        let (m, cfg, st) = negative_cycle(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| enumerate_equilibria(black_box(&m), &cfg, st.at(1)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, examples, scaling);
criterion_main!(benches);
