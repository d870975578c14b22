use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use verlinde_bench::{datum, FUSION_CASES};
use verlinde_core::fusion::{s_matrix, Guards};
use verlinde_core::real_structure::{preset, Preset};
use verlinde_core::{FusionTable, RealVerlinde};

fn fusion_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("fusion_table");
    for &(t, k) in FUSION_CASES {
        let d = datum(t);
        g.bench_with_input(BenchmarkId::new(t, k), &k, |b, &k| {
            b.iter(|| FusionTable::compute(black_box(&d), k).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(format!("{t}-parallel"), k), &k, |b, &k| {
            b.iter(|| FusionTable::compute_with(black_box(&d), k, Guards::default(), true).unwrap())
        });
    }
    g.finish();
}

fn s_matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_matrix");
    for &(t, k) in FUSION_CASES {
        let d = datum(t);
        g.bench_with_input(BenchmarkId::new(t, k), &k, |b, &k| b.iter(|| s_matrix(black_box(&d), k).unwrap()));
    }
    g.finish();
}

fn real_products(c: &mut Criterion) {
    let d = datum("A3");
    let inv = preset(&d, Preset::SuEvenQuaternionic).unwrap();
    let table = FusionTable::compute(&d, 2).unwrap();
    let rv = RealVerlinde::new(&inv, &table).unwrap();
    let gens = rv.generators();
    c.bench_function("real_products/A3-k2", |b| {
        b.iter(|| {
            for x in &gens {
                for y in &gens {
                    black_box(rv.multiply(x, y).unwrap());
                }
            }
        })
    });
}

criterion_group!(benches, fusion_tables, s_matrices, real_products);
criterion_main!(benches);
