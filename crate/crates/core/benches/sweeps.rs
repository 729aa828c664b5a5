//! Sequential vs rayon sweeps over the two hot loops: the master identity on
//! random instances and the O'Neill data of a weighted Hopf model.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use foliation_core::hopf::{oneill_from_brackets, sample_indexed, WeightedHopfModel, DEFAULT_EPS_DEG};
use foliation_core::instances::Instance;
use foliation_core::oneill::MasterIdentityParts;
use foliation_core::sweep::{map_indexed, map_indexed_sequential};
use std::hint::black_box;

fn master(i: usize) -> f64 {
    let inst = Instance::generate(5, 2, 1, i as u64).unwrap();
    MasterIdentityParts::compute(&inst.rm, &inst.a, &inst.form).unwrap().residual()
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("master_identity");
    for n in [64, 256] {
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| black_box(map_indexed_sequential(n, master)))
        });
        group.bench_with_input(BenchmarkId::new("map_indexed", n), &n, |b, &n| {
            b.iter(|| black_box(map_indexed(n, master)))
        });
    }
    group.finish();

    let model = WeightedHopfModel::new(vec![1.0, 0.8, 0.6, 0.5]).unwrap();
    let hopf = |i: usize| {
        let z = sample_indexed(&model, 1, i as u64, DEFAULT_EPS_DEG).unwrap();
        oneill_from_brackets(&model, &z).unwrap().1
    };
    let mut group = c.benchmark_group("hopf_points");
    group.bench_function("sequential", |b| b.iter(|| black_box(map_indexed_sequential(100, hopf))));
    group.bench_function("map_indexed", |b| b.iter(|| black_box(map_indexed(100, hopf))));
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = sweeps
}
criterion_main!(benches);
