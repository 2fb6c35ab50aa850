use binsamp::walsh::{fwht, fwht_nd, Direction};
use binsamp::WalshOrdering;
use binsamp_bench::signal;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

fn fwht_1d(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht");
    for bits in [10u32, 14, 18] {
        let n = 1usize << bits;
        let x = signal(n);
        group.throughput(Throughput::Elements(n as u64));
        for ordering in WalshOrdering::ALL {
            group.bench_with_input(BenchmarkId::new(ordering.name(), n), &x, |b, x| {
                b.iter(|| fwht(black_box(x), ordering, Direction::Forward).unwrap())
            });
        }
    }
    group.finish();
}

fn fwht_2d(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht_nd");
    for side in [64usize, 256, 1024] {
        let x = signal(side * side);
        group.throughput(Throughput::Elements((side * side) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(side), &x, |b, x| {
            b.iter(|| fwht_nd(black_box(x), &[side, side], WalshOrdering::Kaczmarz, Direction::Forward).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fwht_1d, fwht_2d);
criterion_main!(benches);
