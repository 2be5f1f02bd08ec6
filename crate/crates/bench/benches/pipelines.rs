use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use maass_core::lift::lift_table;
use maass_core::modforms::{level1_eigenform, plus_eigenform};
use maass_core::quadform::{enumerate_forms, HalfIntegralForm};
use maass_core::siegel::{siegel_bruteforce, CapabilityTable};

fn siegel_series(c: &mut Criterion) {
    let caps = CapabilityTable::default();
    let h = HalfIntegralForm::parse("2,0;0,6").unwrap();
    let mut group = c.benchmark_group("siegel_bruteforce");
    group.sample_size(10);
    for (p, j) in [(2u64, 6u32), (3, 4), (5, 3)] {
        group.bench_function(format!("p{p}_j{j}"), |b| b.iter(|| siegel_bruteforce(black_box(&h), p, j, &caps).unwrap()));
    }
    let h4 = HalfIntegralForm::parse("2,1,1,1;1,2,1,1;1,1,2,1;1,1,1,2").unwrap();
    group.bench_function("size4_p2_j2", |b| b.iter(|| siegel_bruteforce(black_box(&h4), 2, 2, &caps).unwrap()));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_forms");
    group.sample_size(10);
    group.bench_function("size2_d200", |b| b.iter(|| enumerate_forms(2, black_box(200)).unwrap()));
    group.bench_function("size3_d40", |b| b.iter(|| enumerate_forms(3, black_box(40)).unwrap()));
    group.bench_function("size4_d64", |b| b.iter(|| enumerate_forms(4, black_box(64)).unwrap()));
    group.finish();
}

fn eigenforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigenforms");
    group.sample_size(10);
    group.bench_function("plus_k9_prec400", |b| b.iter(|| plus_eigenform(black_box(9), 400).unwrap()));
    group.bench_function("level1_w18_prec400", |b| b.iter(|| level1_eigenform(black_box(18), 400).unwrap()));
    group.finish();
}

fn lifts(c: &mut Criterion) {
    let caps = CapabilityTable::default();
    let g = plus_eigenform(6, 100).unwrap();
    let f = level1_eigenform(12, 30).unwrap();
    let mut group = c.benchmark_group("lift_table");
    group.sample_size(10);
    group.bench_function("genus4_d48", |b| b.iter(|| lift_table(4, &g, &f, black_box(48), &caps).unwrap()));
    group.finish();
}

criterion_group!(benches, siegel_series, enumeration, eigenforms, lifts);
criterion_main!(benches);
