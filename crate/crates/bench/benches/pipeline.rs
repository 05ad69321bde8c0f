use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wrapcycle::morse::DelaunayMorse;
use wrapcycle::pipeline::{reconstruct, sphere_sample, verify_theorems, RGrid, ReconstructOptions};
use wrapcycle::random::{rng, uniform_cloud};
use wrapcycle::reduction::{exhaustive_reduce, filtration_boundary_matrix, standard_reduce, standard_reduce_with};
use wrapcycle::Field;

fn delaunay(c: &mut Criterion) {
    let mut g = c.benchmark_group("delaunay_filtration");
    g.sample_size(10);
    for n in [100, 400] {
        let cloud = sphere_sample(n, 1).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &cloud, |b, cloud| {
            b.iter(|| DelaunayMorse::new(black_box(cloud)).unwrap())
        });
    }
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let dm = DelaunayMorse::new(&sphere_sample(400, 1).unwrap()).unwrap();
    let d = filtration_boundary_matrix(&dm.filtration, Field::z2());
    let mut g = c.benchmark_group("reduction_sphere_400");
    g.sample_size(10);
    g.bench_function("standard", |b| b.iter(|| standard_reduce(black_box(&d))));
    g.bench_function("standard_no_apparent", |b| {
        b.iter(|| standard_reduce_with(black_box(&d), false))
    });
    g.bench_function("exhaustive", |b| b.iter(|| exhaustive_reduce(black_box(&d))));
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    let sphere = sphere_sample(300, 1).unwrap();
    let opts = ReconstructOptions {
        dim: Some(2),
        ..Default::default()
    };
    g.bench_function("reconstruct_sphere_300", |b| {
        b.iter(|| reconstruct(black_box(&sphere), &opts).unwrap())
    });
    let plane = uniform_cloud(&mut rng(3), 25, 2, 4).unwrap();
    g.bench_function("verify_plane_25", |b| {
        b.iter(|| verify_theorems(black_box(&plane), &RGrid::Auto, Field::z2(), true).unwrap())
    });
    g.finish();
}

criterion_group!(benches, delaunay, reduction, pipeline);
criterion_main!(benches);
