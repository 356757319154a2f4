use std::hint::black_box;

use bwtraj_bench::{burst, configured, mixed};
use bwtraj_core::eval::default_interval;
use bwtraj_core::ingest::merge_stream;
use bwtraj_core::pqueue::PriorityQueue;
use bwtraj_core::{accuracy, Algorithm};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn compressors(c: &mut Criterion) {
    let data = burst(1);
    let n: usize = data.values().map(|t| t.len()).sum();
    let mut group = c.benchmark_group("compress_burst_10pct");
    group.throughput(Throughput::Elements(n as u64));
    group.sample_size(20);
    for alg in configured(&data, 0.1) {
        group.bench_with_input(BenchmarkId::from_parameter(alg.kind()), &alg, |b, alg: &Algorithm| {
            b.iter(|| alg.run(black_box(&data)).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let data = mixed(2, 20, 7_200.0);
    let interval = default_interval(&data).unwrap();
    let alg = &configured(&data, 0.1)[0];
    let samples = alg.run(&data).unwrap();
    c.bench_function("accuracy_mixed", |b| {
        b.iter(|| accuracy(black_box(&data), black_box(&samples), interval).unwrap())
    });
    c.bench_function("merge_stream_burst", |b| {
        let burst = burst(3);
        b.iter(|| merge_stream(black_box(burst.values())))
    });
}

fn queue(c: &mut Criterion) {
    let mut group = c.benchmark_group("pqueue_churn");
    for size in [1_000u32, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |b, &size| {
            b.iter(|| {
                let mut q = PriorityQueue::new();
                for k in 0..size {
                    q.add(k, f64::from(k.wrapping_mul(2_654_435_761) % 1_000)).unwrap();
                }
                for k in (0..size).step_by(3) {
                    q.update_priority(&k, -1.0).unwrap();
                }
                while q.pop_min().is_ok() {}
            })
        });
    }
    group.finish();
}

criterion_group!(benches, compressors, evaluation, queue);
criterion_main!(benches);
