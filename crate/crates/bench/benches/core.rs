use criterion::{criterion_group, criterion_main, Criterion};
use kronecker_bench::{element, problem, quartic, skewed_lattice, sqrt2, FIRST_THEOREM, SECOND_THEOREM};
use kronecker_core::exactnum::FieldElement;
use kronecker_core::geometry::successive_minima;
use kronecker_core::kronecker::{kr_search, solve_theorem1, solve_theorem2, PRECISION_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::hint::black_box;

fn field_arithmetic(c: &mut Criterion) {
    let f = quartic();
    let x = element(&f, &[1, -3, 2, 5]);
    let y = element(&f, &[-2, 1, 0, 7]);
    c.bench_function("quartic mul", |b| b.iter(|| black_box(&x * &y)));
    c.bench_function("quartic inverse", |b| b.iter(|| black_box(x.inv())));
    c.bench_function("quartic sign", |b| b.iter(|| black_box((&x - &y).sign())));
}

fn search(c: &mut Criterion) {
    let f = sqrt2();
    let th = vec![FieldElement::generator(&f)];
    let a = [BigRational::new(1.into(), 2.into())];
    let eps = BigRational::new(1.into(), 1000.into());
    c.bench_function("kr_search sqrt2 eps=1/1000", |b| {
        b.iter(|| kr_search(&th, &a, &eps, &BigInt::from(1_024_000), PRECISION_CAP).unwrap())
    });
}

fn minima(c: &mut Criterion) {
    for rank in [2, 4] {
        let l = skewed_lattice(rank);
        c.bench_function(&format!("successive_minima rank {rank}"), |b| b.iter(|| successive_minima(&l).unwrap()));
    }
}

fn pipelines(c: &mut Criterion) {
    let p1 = problem(FIRST_THEOREM);
    let p2 = problem(SECOND_THEOREM);
    let mut g = c.benchmark_group("pipelines");
    g.sample_size(10);
    g.bench_function("first theorem demo", |b| b.iter(|| solve_theorem1(&p1).unwrap()));
    g.bench_function("second theorem demo", |b| b.iter(|| solve_theorem2(&p2).unwrap()));
    g.finish();
}

criterion_group!(benches, field_arithmetic, search, minima, pipelines);
criterion_main!(benches);
