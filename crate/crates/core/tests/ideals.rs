use std::sync::Arc;

use padic_casimir::finite_field::FiniteField;
use padic_casimir::graded_ideals::*;
use padic_casimir::padic_tower::build_tower;
use padic_casimir::polynomial::{Mono, Poly, PolyRing};
use padic_casimir::pvalued_groups::{build_group_context, GroupCase, GroupContext};
use proptest::prelude::*;

const B: usize = DEFAULT_SPOLY_BUDGET;

fn gl2(u: &[i64], e: &[Vec<i64>]) -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, u, e, None).unwrap()).unwrap()
}

fn sqrt3() -> GroupContext {
    gl2(&[0, 1], &[vec![-3], vec![0], vec![1]])
}

fn unramified(u: &[i64]) -> GroupContext {
    gl2(u, &[vec![-3], vec![1]])
}

#[test]
fn explicit_ideal_over_sqrt3() {
    let ctx = sqrt3();
    let c = casimir_ideal(&ctx).unwrap();
    assert_eq!(c.generators.len(), 6);
    let explicit = IdealSpec::parse_text(
        &c.ring,
        "z0_0\nz0_1\nh0_1\ne0_0*f0_0\ne0_1*f0_1\nh0_0^2 + 4*(e0_1*f0_0 + e0_0*f0_1)\n",
    )
    .unwrap();
    assert!(radical_equivalence(&c, &explicit, B).unwrap());
    assert_eq!(krull_dimension(&c, B).unwrap().krull_dimension, 2);
}

#[test]
fn unramified_dimensions() {
    for u in [vec![0, 1], vec![1, 0, 1], vec![1, 2, 0, 1]] {
        let ctx = unramified(&u);
        let f = u.len() - 1;
        let reference = reference_ideals(&ctx, ReferenceKind::Unramified).unwrap();
        assert_eq!(reference.generators.len(), 3 * f);
        assert_eq!(krull_dimension(&reference, B).unwrap().krull_dimension, f);
        let c = casimir_ideal(&ctx).unwrap();
        assert_eq!(c.generators.len(), 3 * f);
        assert!(radical_equivalence(&c, &reference, B).unwrap());
        assert_eq!(krull_dimension(&c, B).unwrap().krull_dimension, f);
    }
}

#[test]
fn principal_series_dimensions() {
    for ctx in [unramified(&[0, 1]), unramified(&[1, 0, 1]), sqrt3()] {
        let (e, f) = (ctx.tower().e(), ctx.tower().f());
        let ps = reference_ideals(&ctx, ReferenceKind::PrincipalSeries).unwrap();
        let gb = ps.groebner(B).unwrap();
        let mut gens: Vec<String> = ps.generators.iter().map(|g| g.to_string()).collect();
        let mut basis: Vec<String> = gb.polys().iter().map(|g| g.to_string()).collect();
        gens.sort();
        basis.sort();
        assert_eq!(gens, basis);
        assert_eq!(krull_dimension(&ps, B).unwrap().krull_dimension, e * f);
    }
}

#[test]
fn quaternion_casimir_ideal() {
    let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).unwrap();
    let ctx = build_group_context(GroupCase::Quaternion, &t).unwrap();
    let c = casimir_ideal(&ctx).unwrap();
    assert!(krull_dimension(&c, B).unwrap().krull_dimension <= 1);
    let reference = reference_ideals(&ctx, ReferenceKind::Unramified).unwrap();
    assert!(radical_equivalence(&c, &reference, B).unwrap());
    assert!(reference_ideals(&ctx, ReferenceKind::PrincipalSeries).is_err());
}

#[test]
fn dimension_lemma() {
    for field in [FiniteField::prime(3).unwrap(), FiniteField::new(3, &[1, 0, 1]).unwrap()] {
        for n in 0..3 {
            let r = dimension_lemma_check(n, &field, 25, 17, B).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.generic_dimension.is_some(), n <= 1);
        }
    }
}

// n = 1: the ideal (u0², 2u0u1 − v0w0, u1² − v0w1 − v1w0, v1w1).
#[test]
fn generic_lemma_ideal_n1() {
    let f = FiniteField::prime(3).unwrap();
    let i = lemma_ideal(&f, 1, None);
    let expected = IdealSpec::parse_text(&i.ring, "u0^2\n2*u0*u1 - v0*w0\nu1^2 - v0*w1 - v1*w0\n-v1*w1\n").unwrap();
    assert_eq!(i.generators, expected.generators);
    assert_eq!(krull_dimension(&i, B).unwrap().krull_dimension, 2);
}

#[test]
fn groebner_is_deterministic_across_threads() {
    let c = casimir_ideal(&sqrt3()).unwrap();
    let reference: Vec<String> = c.groebner(B).unwrap().polys().iter().map(|p| p.to_string()).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let c = c.clone();
            std::thread::spawn(move || c.groebner(B).unwrap().polys().iter().map(|p| p.to_string()).collect::<Vec<_>>())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), reference);
    }
}

#[test]
fn monomial_crosscheck_passes() {
    let r = monomial_crosscheck(20, 13, B).unwrap();
    assert_eq!(r.cases.len(), 20);
    assert!(r.passed);
}

fn ring(n: usize) -> Arc<PolyRing> {
    PolyRing::new(FiniteField::prime(3).unwrap(), (0..n).map(|i| format!("x{i}")).collect(), None)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_ideal_dimensions(exps in proptest::collection::vec(proptest::collection::vec(0u32..3, 5), 1..5)) {
        let r = ring(5);
        let monos: Vec<Mono> = exps.into_iter().map(Mono).filter(|m| m.degree() > 0).collect();
        prop_assume!(!monos.is_empty());
        let gens: Vec<Poly> = monos.iter().map(|m| Poly::monomial(&r, m.clone(), 1)).collect();
        let ideal = IdealSpec::new(&r, gens.clone(), vec![String::new(); gens.len()]).unwrap();
        prop_assert_eq!(krull_dimension(&ideal, B).unwrap().krull_dimension, brute_force_dimension(5, &monos));
    }

    #[test]
    fn powers_lie_in_the_radical(a in proptest::collection::vec(0u32..3, 3), k in 1u32..4) {
        let r = ring(3);
        let g = Poly::from_terms(&r, [(Mono(a.clone()), 1), (Mono(vec![0, 1, 0]), 2)]);
        prop_assume!(!g.is_zero());
        let ideal = IdealSpec::new(&r, vec![g.pow(k)], vec![String::new()]).unwrap();
        prop_assert!(in_radical(&ideal, &g, B).unwrap());
    }

    #[test]
    fn reduced_bases_reduce_generators_to_zero(s in proptest::collection::vec((proptest::collection::vec(0u32..3, 3), 1u32..3), 2..6)) {
        let r = ring(3);
        let half = s.len() / 2;
        let g1 = Poly::from_terms(&r, s[..half].iter().map(|(e, c)| (Mono(e.clone()), *c)));
        let g2 = Poly::from_terms(&r, s[half..].iter().map(|(e, c)| (Mono(e.clone()), *c)));
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let gb = groebner(&r, &[g1.clone(), g2.clone()], B).unwrap();
        prop_assert!(gb.contains(&g1) && gb.contains(&g2));
        prop_assert!(gb.contains(&g1.mul(&g2).add(&g2)));
    }
}
