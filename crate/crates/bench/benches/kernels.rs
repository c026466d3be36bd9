use std::hint::black_box;

use conelab_core::complex::{development_ball, PolygonOfGroups, NONPROPER_TRIANGLE_JSON};
use conelab_core::electrify::{cone_extension, coned_tree};
use conelab_core::group::{all_generators, cayley_ball, GroupScenario, DEFAULT_BALL_BUDGET};
use conelab_core::metric::delta_four_point;
use conelab_core::DeltaMode;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn delta_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta_four_point");
    group.sample_size(10);
    for n in [50, 100, 200] {
        let t = coned_tree(n, 5, 3, 7).unwrap();
        let ext = cone_extension(&t.tree, &t.sets).unwrap();
        let mode = DeltaMode::Exhaustive {
            budget: ext.vertex_count(),
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &ext, |b, g| {
            b.iter(|| delta_four_point(black_box(g), mode).unwrap())
        });
    }
    group.finish();
}

fn cayley(c: &mut Criterion) {
    let s = GroupScenario::from_json(r#"{"kind":"free_product_cyclic","orders":[2,2,2,2]}"#).unwrap();
    let gens = all_generators(&s.group);
    let mut group = c.benchmark_group("cayley_ball");
    for r in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| cayley_ball(&s.group, &gens, r, DEFAULT_BALL_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn development(c: &mut Criterion) {
    let data = PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON)
        .unwrap()
        .development_data()
        .unwrap();
    let gens: Vec<_> = ["a", "b", "d"].iter().map(|n| data.group.gen(n).unwrap()).collect();
    let mut group = c.benchmark_group("development_ball");
    group.sample_size(10);
    for r in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| development_ball(&data, &gens, r, DEFAULT_BALL_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, delta_kernel, cayley, development);
criterion_main!(benches);
