//! Sequential against rayon-parallel sweeps on one n = 10 instance.

use std::hint::black_box;

use butterfly_bct::analysis::{bct_with, ddt_with, lqsl_table_with, walsh_with, Mode};
use butterfly_bct::{Exec, Quadrinomial, TowerCtx};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn tables(c: &mut Criterion) {
    let tower = TowerCtx::with_modulus(5, None).unwrap();
    let q = Quadrinomial::new(&tower, 1, 0b00010).unwrap();
    let t = q.table();

    let mut g = c.benchmark_group("n10");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new("table", name), &exec, |b, &e| b.iter(|| q.table_with(black_box(e))));
        g.bench_with_input(BenchmarkId::new("ddt", name), &exec, |b, &e| {
            b.iter(|| ddt_with(&t, Mode::MaxOnly, black_box(e)).unwrap().max)
        });
        g.bench_with_input(BenchmarkId::new("bct", name), &exec, |b, &e| {
            b.iter(|| bct_with(&t, Mode::MaxOnly, black_box(e)).unwrap().max)
        });
        g.bench_with_input(BenchmarkId::new("bct_lqsl", name), &exec, |b, &e| {
            b.iter(|| lqsl_table_with(&t, Mode::MaxOnly, black_box(e)).unwrap().max)
        });
        g.bench_with_input(BenchmarkId::new("walsh", name), &exec, |b, &e| {
            b.iter(|| walsh_with(&t, Mode::MaxOnly, black_box(e)).unwrap().max)
        });
    }
    g.finish();
}

criterion_group!(benches, tables);
criterion_main!(benches);
