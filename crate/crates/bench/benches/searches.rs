use std::hint::black_box;

use cornerrank::stablerank::{skew_sr1_check, RangeIndex, SkewCorner};
use cornerrank::zsolvers::z_reducer;
use cornerrank::Reducer;
use cornerrank_bench::{m2_zmod, m2z_reducer, m2z_row};
use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

fn range_index(c: &mut Criterion) {
    let r = m2_zmod(2);
    c.bench_function("range_index_m2_zmod2", |b| b.iter(|| RangeIndex::build(black_box(&r)).unwrap()));
    let idx = RangeIndex::build(&r).unwrap();
    c.bench_function("irreducible_row_m2_zmod2_n1", |b| b.iter(|| idx.irreducible_row(black_box(1)).unwrap()));
}

fn sr1_table(c: &mut Criterion) {
    let r = m2_zmod(2);
    let corner = SkewCorner::new(&r, r.one(), r.one()).unwrap();
    c.bench_function("skew_sr1_check_m2_zmod2", |b| b.iter(|| skew_sr1_check(black_box(&corner)).unwrap()));
}

fn integers(c: &mut Criterion) {
    let (a1, a2, b) = (BigInt::from(2 * 3 * 5 * 7 * 11 * 13i64), BigInt::from(30030i64 * 17), BigInt::from(19i64));
    c.bench_function("z_reducer", |bn| bn.iter(|| z_reducer(black_box(&a1), &a2, &b).unwrap()));
    let red = m2z_reducer();
    let row = m2z_row();
    c.bench_function("full_corner_m2z", |bn| bn.iter(|| red.reduce(black_box(&row)).unwrap()));
}

criterion_group!(benches, range_index, sr1_table, integers);
criterion_main!(benches);
