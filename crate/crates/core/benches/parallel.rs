//! Parallel core against a single worker. Build with
//! `--no-default-features` to time the sequential fallback instead; both
//! groups then measure the same code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holovolume::dynamics::greens_solution;
use holovolume::eigenmodes::compute_modes;
use holovolume::memory_cycle::efficiency_sweep;
use holovolume::verify::random_smooth;
use holovolume::{BoundaryData, Coupling, UnitGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let all = rayon::current_num_threads();
    let mut v = vec![(
        "1".to_string(),
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap(),
    )];
    if all > 1 {
        v.push((
            all.to_string(),
            rayon::ThreadPoolBuilder::new()
                .num_threads(all)
                .build()
                .unwrap(),
        ));
    }
    v
}

fn modes(c: &mut Criterion) {
    let g = UnitGrid::gauss_legendre(200).unwrap();
    let k = Coupling::new(4.0).unwrap();
    let mut group = c.benchmark_group("compute_modes_kappa4_n200");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("threads", name), |b| {
            b.iter(|| pool.install(|| compute_modes(k, black_box(&g), 5).unwrap()))
        });
    }
    group.finish();
}

fn greens(c: &mut Criterion) {
    let g = UnitGrid::trapezoid(201).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let b = BoundaryData::from_fns(
        g.clone(),
        g.clone(),
        random_smooth(&mut rng),
        random_smooth(&mut rng),
    );
    let k = Coupling::new(4.0).unwrap();
    let mut group = c.benchmark_group("greens_solution_n200");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("threads", name), |bch| {
            bch.iter(|| pool.install(|| greens_solution(black_box(&b), k, &g).unwrap()))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let g = UnitGrid::gauss_legendre(64).unwrap();
    let mut group = c.benchmark_group("efficiency_sweep_n64");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("threads", name), |b| {
            b.iter(|| {
                pool.install(|| {
                    efficiency_sweep(&[4.0], &[4.0, 8.0, 16.0, 25.0], &[1], &g).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, modes, greens, sweep);
criterion_main!(benches);
