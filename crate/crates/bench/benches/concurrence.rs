use criterion::{black_box, criterion_group, criterion_main, Criterion};
use entfilter_bench::psd_operators;
use entfilter_core::concurrence::concurrence;
use entfilter_core::scan::oracle_concurrence;

fn bench_concurrence(c: &mut Criterion) {
    let ops = psd_operators(64, 1);
    let mut group = c.benchmark_group("concurrence");
    group.bench_function("primary", |b| {
        b.iter(|| {
            for n in &ops {
                black_box(concurrence(black_box(n)).unwrap());
            }
        })
    });
    group.bench_function("oracle", |b| {
        b.iter(|| {
            for n in &ops {
                black_box(oracle_concurrence(black_box(n)).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, bench_concurrence);
criterion_main!(benches);
