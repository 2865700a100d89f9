use criterion::{black_box, criterion_group, criterion_main, Criterion};
use padic_casimir::finite_field::FiniteField;
use padic_casimir::graded_ideals::{casimir_ideal, krull_dimension, lemma_ideal, DEFAULT_SPOLY_BUDGET};
use padic_casimir::iwasawa_algebra::build_algebra;
use padic_casimir::lie_symbols::{compare_symbol, LieKind, RealizationOptions};
use padic_casimir::pvalued_groups::check_p_valuation_axioms;
use padic_casimir::rational::q;
use padic_casimir_bench::{q3, q9, sqrt3};

fn groebner(c: &mut Criterion) {
    let casimir = casimir_ideal(&sqrt3()).unwrap();
    c.bench_function("groebner/casimir_sqrt3", |b| b.iter(|| casimir.groebner(DEFAULT_SPOLY_BUDGET).unwrap()));
    let lemma = lemma_ideal(&FiniteField::new(3, &[1, 0, 1]).unwrap(), 2, None);
    c.bench_function("dimension/lemma_f9_n2", |b| b.iter(|| krull_dimension(&lemma, DEFAULT_SPOLY_BUDGET).unwrap()));
}

fn algebra(c: &mut Criterion) {
    let ctx = q3();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    let x = a.mul(&a.basis_b(0), &a.basis_b(1));
    let y = a.add(&a.basis_b(2), &a.basis_b(3));
    c.bench_function("algebra/mul_q3_level3", |b| b.iter(|| a.mul(black_box(&x), black_box(&y))));
    c.bench_function("algebra/build_q9_level2", |b| b.iter(|| build_algebra(&q9(), q(2, 1), 8).unwrap()));
}

fn symbols(c: &mut Criterion) {
    let ctx = q3();
    let opts = RealizationOptions::default();
    c.bench_function("symbols/casimir_q3", |b| b.iter(|| compare_symbol(&ctx, LieKind::Delta, 0, 0, &opts).unwrap()));
    let ctx = sqrt3();
    c.bench_function("symbols/casimir_sqrt3", |b| b.iter(|| compare_symbol(&ctx, LieKind::Delta, 0, 0, &opts).unwrap()));
}

fn groups(c: &mut Criterion) {
    let ctx = q3();
    c.bench_function("groups/axioms_q3_50", |b| b.iter(|| check_p_valuation_axioms(&ctx, 50, 1).unwrap()));
}

criterion_group!(benches, groebner, algebra, symbols, groups);
criterion_main!(benches);
