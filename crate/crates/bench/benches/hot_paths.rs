//! Benchmarks for the three expensive paths: Pfaffian expansion, exhaustive
//! Lagrangian search, and the stabilizer solve.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kuechle_core::linalg::pfaffian;
use kuechle_core::pencils::SkewPencil;
use kuechle_core::scalars::proj_line_points;
use kuechle_core::trivectors::{stabilizer_dim, trace_form};
use kuechle_core::{Field, FieldElem, SkewMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_skew(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
    let upper: Vec<FieldElem> = (0..n * (n - 1) / 2)
        .map(|_| field.from_i64(rng.gen_range(0..101)))
        .collect();
    SkewMatrix::from_upper(field.clone(), n, &upper)
}

fn bench_pfaffian(c: &mut Criterion) {
    let field = Field::prime(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("pfaffian");
    for n in [6usize, 10, 14] {
        let m = random_skew(&field, n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| pfaffian(m))
        });
    }
    group.finish();
}

fn bench_lagrangian_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("lagrangian-enumeration");
    group.sample_size(10);
    for (n, q) in [(2usize, 3u64), (3, 2)] {
        let field = Field::prime(q).unwrap();
        let points = proj_line_points(field.clone()).unwrap();
        let pencil = SkewPencil::from_root_points(field, &points[..n]).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}-q{q}")),
            &pencil,
            |b, p| b.iter(|| p.enumerate_lagrangians().unwrap()),
        );
    }
    group.finish();
}

fn bench_stabilizer(c: &mut Criterion) {
    let form = trace_form(Field::Rational).unwrap();
    c.bench_function("stabilizer-dim-trace-form", |b| {
        b.iter(|| stabilizer_dim(&form))
    });
}

criterion_group!(
    benches,
    bench_pfaffian,
    bench_lagrangian_enumeration,
    bench_stabilizer
);
criterion_main!(benches);
