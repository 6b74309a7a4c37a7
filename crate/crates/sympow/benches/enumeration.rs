//! Benchmarks for the search-heavy entry points. The same binary serves two
//! configurations: `cargo bench` measures the default rayon-backed build, and
//! `cargo bench --no-default-features` measures the sequential fallback.
//! Criterion keeps baselines keyed by bench name, so running the two commands
//! back to back prints the speedup (or lack of one) directly.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use sympow::{
    brute_force_iso, enumerate_m, gl_orbits, induced_matrix, structure_constants, validate_seed,
    Field, Matrix, DEFAULT_ENUM_BUDGET,
};

fn mat(field: Field, rows: &[&[i64]]) -> Matrix {
    Matrix::from_fn(field, rows.len(), rows[0].len(), |i, j| {
        field.from_i64(rows[i][j])
    })
}

fn axis(field: Field, n: usize, k: usize) -> Vec<sympow::Scalar> {
    (0..n)
        .map(|i| if i == k { field.one() } else { field.zero() })
        .collect()
}

fn bench_induced_matrix(c: &mut Criterion) {
    let a = mat(Field::Q, &[&[1, 2, 3], &[0, 1, 4], &[5, 0, 1]]);
    c.bench_function("induced_matrix_n3_d4", |b| {
        b.iter(|| induced_matrix(std::hint::black_box(&a), 4).unwrap())
    });
}

fn bench_structure_constants(c: &mut Criterion) {
    let a = mat(Field::Q, &[&[1, 0, 0], &[2, 1, 0], &[3, 4, 1]]);
    let seed = validate_seed(&a, &axis(Field::Q, 3, 2)).unwrap();
    c.bench_function("structure_constants_n3_d3", |b| {
        b.iter(|| structure_constants(std::hint::black_box(&seed), 3).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(20).measurement_time(Duration::from_secs(8));
    group.bench_function("enumerate_m_n2_p5", |b| {
        b.iter(|| enumerate_m(2, 5, false, DEFAULT_ENUM_BUDGET).unwrap())
    });
    group.bench_function("gl_orbits_n2_p5", |b| {
        b.iter(|| gl_orbits(2, 5, false, DEFAULT_ENUM_BUDGET).unwrap())
    });
    group.finish();
}

fn bench_iso_scan(c: &mut Criterion) {
    // diag(1,1) and diag(1,2) seeds share every cheap invariant (the search
    // cannot reject them up front) but their ad-spectra {1,1,1} and {1,2,4}
    // are not proportional, so no isomorphism exists and the search has to
    // exhaust all candidate matrices. That worst case is the code path the
    // parallel feature exists for.
    let f5 = Field::prime(5).unwrap();
    let s1 = validate_seed(&Matrix::identity(f5, 2), &axis(f5, 2, 0)).unwrap();
    let s2 = validate_seed(
        &Matrix::diagonal(f5, &[f5.one(), f5.from_i64(2)]).unwrap(),
        &axis(f5, 2, 0),
    )
    .unwrap();
    let t1 = structure_constants(&s1, 2).unwrap();
    let t2 = structure_constants(&s2, 2).unwrap();

    let mut group = c.benchmark_group("iso");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    group.bench_function("brute_force_iso_exhaust_f5_d2", |b| {
        b.iter(|| {
            let found = brute_force_iso(
                std::hint::black_box(&t1),
                std::hint::black_box(&t2),
                2_000_000,
            )
            .unwrap();
            assert!(found.is_none());
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_induced_matrix,
    bench_structure_constants,
    bench_enumeration,
    bench_iso_scan
);
criterion_main!(benches);
