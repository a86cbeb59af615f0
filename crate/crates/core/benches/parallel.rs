use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dce_core::rates::{discrete_photon_number, emission_spectrum, OracleOptions, SpectrumGrid};
use dce_core::specfun::find_cutoffs_with;
use dce_core::{CoaxGeometry, Drive, Exec, PhysicalConstants};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn oracle_case(w0dt: f64) -> (CoaxGeometry, Drive, f64) {
    let k = PhysicalConstants::CODATA2018;
    let omega0 = 2.0 * PI * 1e10;
    let dt = w0dt / omega0;
    let geom = CoaxGeometry::new(1e-3, 1e-6, 128.0 * k.c() * dt).unwrap();
    (geom, Drive::new(omega0, 1e-12).unwrap(), dt)
}

fn oracle(c: &mut Criterion) {
    let k = PhysicalConstants::CODATA2018;
    let mut group = c.benchmark_group("discrete_photon_number");
    group.sample_size(20);
    for w0dt in [1e3, 1e4] {
        let (geom, drive, dt) = oracle_case(w0dt);
        for (name, exec) in STRATEGIES {
            let opts = OracleOptions {
                exec,
                include_counter_rotating: true,
                ..OracleOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, w0dt), &opts, |b, opts| {
                b.iter(|| discrete_photon_number(&geom, &drive, black_box(dt), &k, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn cutoffs(c: &mut Criterion) {
    let k = PhysicalConstants::CODATA2018;
    let geom = CoaxGeometry::new(1e-3, 2e-4, 1.0).unwrap();
    let mut group = c.benchmark_group("find_cutoffs");
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| find_cutoffs_with(exec, black_box(&geom), 8, 4, &k).unwrap())
        });
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let k = PhysicalConstants::CODATA2018;
    let (geom, drive, dt) = oracle_case(1e4);
    let grid = SpectrumGrid::default();
    let mut group = c.benchmark_group("emission_spectrum");
    group.sample_size(20);
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| emission_spectrum(&geom, &drive, black_box(dt), &k, &grid, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, cutoffs, spectrum);
criterion_main!(benches);
