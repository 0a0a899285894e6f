use criterion::{criterion_group, criterion_main, Criterion};
use frobenius_core::cybe::{cybe_check, r_from_inverse, r_from_peeling};
use frobenius_core::exact;
use frobenius_core::form_graph::build_form_graph;
use frobenius_core::gallery::family_support;
use frobenius_core::sln::kirillov_matrix;
use frobenius_core::{Family, Functional};
use std::hint::black_box;

fn kirillov(c: &mut Criterion) {
    let (g, s) = family_support(Family::Cyclic, 7, 3).unwrap();
    let f = Functional::from_support(&s);
    c.bench_function("kirillov rank P(7,3)", |b| {
        b.iter(|| exact::rank(&kirillov_matrix(black_box(&g), black_box(&f)).unwrap().matrix))
    });
}

fn r_matrices(c: &mut Criterion) {
    let (g, s) = family_support(Family::Cyclic, 5, 2).unwrap();
    let km = kirillov_matrix(&g, &Functional::from_support(&s)).unwrap();
    let r = r_from_inverse(&km).unwrap();
    c.bench_function("r from inverse P(5,2)", |b| b.iter(|| r_from_inverse(black_box(&km)).unwrap()));
    c.bench_function("cybe check P(5,2)", |b| b.iter(|| cybe_check(black_box(&r), &g).unwrap()));
    let fg = build_form_graph(&g, &s).unwrap();
    c.bench_function("peeling P(5,2)", |b| b.iter(|| r_from_peeling(black_box(&fg)).unwrap()));
}

criterion_group!(benches, kirillov, r_matrices);
criterion_main!(benches);
