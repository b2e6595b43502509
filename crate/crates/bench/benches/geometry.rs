use std::hint::black_box;

use cremona_core::bubble::{base_point_tree, push_forward_point};
use cremona_core::dynamics::Tracker;
use cremona_core::plane_map::{contracted_curves, inverse};
use cremona_core::{registry, BubblePoint, ProjPoint};
use criterion::{criterion_group, criterion_main, Criterion};

fn base_points(c: &mut Criterion) {
    let psi = registry::psi();
    let chi = registry::chi();
    c.bench_function("tree/psi", |b| b.iter(|| base_point_tree(black_box(&psi.map)).unwrap()));
    c.bench_function("tree/chi", |b| b.iter(|| base_point_tree(black_box(&chi.map)).unwrap()));
    c.bench_function("contracted/psi", |b| b.iter(|| contracted_curves(black_box(&psi.map)).unwrap()));
    c.bench_function("inverse/psi", |b| b.iter(|| inverse(black_box(&psi.map)).unwrap()));
}

fn transport(c: &mut Criterion) {
    let psi = registry::psi();
    let p = BubblePoint::proper(ProjPoint::from_ints([0, 1, 1]).unwrap());
    c.bench_function("push-forward/psi-on-contracted-line", |b| {
        b.iter(|| push_forward_point(&psi.map, black_box(&p)).unwrap())
    });

    let mut group = c.benchmark_group("tracker");
    group.sample_size(10);
    group.bench_function("psi/k=4", |b| b.iter(|| Tracker::new(&psi, 4).unwrap()));
    group.finish();
}

criterion_group!(benches, base_points, transport);
criterion_main!(benches);
