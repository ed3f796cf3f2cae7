use atomc_bench::{fixture, hardware};
use atomc_core::circuit::BenchKind;
use atomc_core::fidelity::success_probability;
use atomc_core::mapper::{route, route_layered, LayerMode, RouteParams};
use atomc_core::scheduler::schedule;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn routing(c: &mut Criterion) {
    let (spec, _) = hardware();
    let mut group = c.benchmark_group("route");
    for kind in [BenchKind::Ghz, BenchKind::Qft, BenchKind::Twolocal] {
        for n in [32, 120] {
            let (circuit, layout) = fixture(kind, n);
            group.bench_with_input(BenchmarkId::new(kind.name(), n), &(circuit, layout), |b, (c, l)| {
                b.iter(|| route(black_box(c), &spec, l, &RouteParams::default()).unwrap())
            });
        }
    }
    group.finish();
}

fn scheduling(c: &mut Criterion) {
    let (spec, _) = hardware();
    let (circuit, layout) = fixture(BenchKind::Qft, 64);
    let mapped = route(&circuit, &spec, &layout, &RouteParams::default()).unwrap();
    c.bench_function("schedule/qft_64", |b| b.iter(|| schedule(black_box(&mapped), &spec)));
    let s = schedule(&mapped, &spec);
    c.bench_function("fidelity/qft_64", |b| b.iter(|| success_probability(black_box(&s), &spec, 64)));
}

fn layering(c: &mut Criterion) {
    let (spec, _) = hardware();
    let mut group = c.benchmark_group("layers");
    group.sample_size(20);
    let (circuit, _) = fixture(BenchKind::Qft, 32);
    for mode in [LayerMode::Fixed, LayerMode::Reconfig] {
        group.bench_function(mode.to_string(), |b| {
            b.iter(|| route_layered(black_box(&circuit), &spec, mode, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, routing, scheduling, layering);
criterion_main!(benches);
