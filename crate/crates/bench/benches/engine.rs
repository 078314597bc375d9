use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hecke_bench::{mixed_free, patterned_matrix};
use hecke_core::coeff::smith_normal_form;
use hecke_core::hecke::{euclidean_algebra, hecke_homology, surface_algebra, WeightPOpModel};
use hecke_core::lie::{ce_complex, ce_homology, lie_homology_via_bar};
use hecke_core::RingSpec;
use std::hint::black_box;

fn smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for spec in [RingSpec::PLocal { p: 3 }, RingSpec::ChainRing { p: 3, n: 4 }] {
        for n in [8, 24] {
            let m = patterned_matrix(spec, n);
            group.bench_with_input(BenchmarkId::new(format!("{spec:?}"), n), &m, |b, m| b.iter(|| smith_normal_form(black_box(m)).unwrap()));
        }
    }
    group.finish();
}

fn chevalley_eilenberg(c: &mut Criterion) {
    let g = mixed_free(6);
    c.bench_function("ce_complex/mixed_free/6", |b| b.iter(|| ce_complex(black_box(&g), 6).unwrap()));
    c.bench_function("ce_homology/mixed_free/6", |b| b.iter(|| ce_homology(black_box(&g), 6).unwrap()));
    let mut group = c.benchmark_group("bar_oracle");
    group.sample_size(10);
    group.bench_function("mixed_free/4", |b| b.iter(|| lie_homology_via_bar(black_box(&g), 4).unwrap()));
    group.finish();
}

fn hecke(c: &mut Criterion) {
    let mut group = c.benchmark_group("hecke_homology");
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).unwrap();
        let e = euclidean_algebra(4, 2, &model).unwrap();
        group.bench_with_input(BenchmarkId::new("euclidean_4_2", p), &e, |b, g| b.iter(|| hecke_homology(g, p as u32).unwrap()));
        let s = surface_algebra(2, &model).unwrap();
        group.bench_with_input(BenchmarkId::new("surface_genus_2", p), &s, |b, g| b.iter(|| hecke_homology(g, p as u32).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, smith, chevalley_eilenberg, hecke);
criterion_main!(benches);
