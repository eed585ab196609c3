//! Batch throughput on one thread versus the full rayon pool.
//!
//! Without the `parallel` feature only the sequential path exists and the
//! bench measures that alone.

use std::hint::black_box;

use bellgauge_core::explorer::{family_sweep, sample_records, scan_family, GridRange, ScanGrid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn grid() -> ScanGrid {
    ScanGrid {
        c_range: GridRange::new(0.0, 0.3, 16).unwrap(),
        p22_range: GridRange::new(0.2, 0.8, 16).unwrap(),
        p44_range: GridRange::new(0.0, 0.2, 16).unwrap(),
        p11: 0.0,
    }
}

type Workload = (&'static str, fn());

fn workloads() -> [Workload; 3] {
    [
        ("sample_records/2000", || {
            black_box(sample_records(7, 2000, 4).unwrap());
        }),
        ("scan_family/16x16x16", || {
            black_box(scan_family(&grid()).unwrap());
        }),
        ("family_sweep/501", || {
            black_box(family_sweep(501, 0.465).unwrap());
        }),
    ]
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let full = rayon::ThreadPoolBuilder::new().build().unwrap();
    let n = full.current_num_threads();
    vec![("single".to_string(), single), (format!("pool-{n}"), full)]
}

#[cfg(feature = "parallel")]
fn bench_batches(c: &mut Criterion) {
    let pools = pools();
    for (name, work) in workloads() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        for (label, pool) in &pools {
            group.bench_function(BenchmarkId::from_parameter(label), |b| b.iter(|| pool.install(work)));
        }
        group.finish();
    }
}

#[cfg(not(feature = "parallel"))]
fn bench_batches(c: &mut Criterion) {
    for (name, work) in workloads() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function(BenchmarkId::from_parameter("sequential"), |b| b.iter(work));
        group.finish();
    }
}

criterion_group!(benches, bench_batches);
criterion_main!(benches);
