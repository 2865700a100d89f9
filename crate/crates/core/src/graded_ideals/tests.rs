use super::*;
use crate::finite_field::FiniteField;
use crate::padic_tower::build_tower;
use crate::pvalued_groups::build_group_context;

const B: usize = DEFAULT_SPOLY_BUDGET;

fn ring(names: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(FiniteField::prime(3).unwrap(), names.iter().map(|s| s.to_string()).collect(), None)
}

fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> IdealSpec {
    let text = gens.join("\n");
    IdealSpec::parse_text(r, &text).unwrap()
}

fn gl2(u: &[i64], e: &[Vec<i64>]) -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, u, e, None).unwrap()).unwrap()
}

#[test]
fn small_groebner_bases() {
    let r = ring(&["x", "y"]);
    let gb = ideal(&r, &["x^2", "x*y"]).groebner(B).unwrap();
    let s: Vec<String> = gb.polys().iter().map(|p| p.to_string()).collect();
    assert_eq!(s, ["x*y", "x^2"]);
    let gb = ideal(&r, &["x", "y"]).groebner(B).unwrap();
    assert_eq!(gb.len(), 2);
    // x^2 - y, x*y - 1: y^2 - x is the remaining S-polynomial.
    let gb = ideal(&r, &["x^2 - y", "x*y - 1"]).groebner(B).unwrap();
    assert!(gb.contains(&Poly::parse(&r, "y^2 - x").unwrap()));
    assert!(!gb.contains(&Poly::parse(&r, "y - 1").unwrap()));
    assert!(ideal(&r, &["x", "x + 1"]).groebner(B).unwrap().is_unit_ideal());
}

#[test]
fn budget_is_enforced() {
    let r = ring(&["x", "y", "z"]);
    let err = ideal(&r, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y + x"]).groebner(1).unwrap_err();
    assert!(matches!(err, Error::Budget(_)));
}

#[test]
fn dimensions() {
    let r = ring(&["x", "y"]);
    assert_eq!(krull_dimension(&IdealSpec::new(&r, vec![], vec![]).unwrap(), B).unwrap().krull_dimension, 2);
    assert_eq!(krull_dimension(&ideal(&r, &["x*y"]), B).unwrap().krull_dimension, 1);
    assert_eq!(krull_dimension(&ideal(&r, &["x*y - 1", "x"]), B).unwrap().krull_dimension, 0);
}

#[test]
fn radicals() {
    let r = ring(&["x", "y"]);
    assert!(radical_equivalence(&ideal(&r, &["x^2"]), &ideal(&r, &["x"]), B).unwrap());
    assert!(!radical_equivalence(&ideal(&r, &["x"]), &ideal(&r, &["y"]), B).unwrap());
    assert!(in_radical(&ideal(&r, &["x^3", "y^2"]), &Poly::parse(&r, "x + y").unwrap(), B).unwrap());
}

#[test]
fn text_round_trip() {
    let ctx = gl2(&[0, 1], &[vec![-3], vec![0], vec![1]]);
    let i = casimir_ideal(&ctx).unwrap();
    let back = IdealSpec::parse_text(&i.ring, &i.to_text()).unwrap();
    assert_eq!(back.generators, i.generators);
    assert_eq!(back.tags, i.tags);
}

#[test]
fn casimir_ideal_over_q3() {
    let ctx = gl2(&[0, 1], &[vec![-3], vec![1]]);
    let i = casimir_ideal(&ctx).unwrap();
    assert_eq!(i.generators.len(), 3);
    assert!(i.generators.iter().all(|g| g.is_homogeneous()));
    let u = reference_ideals(&ctx, ReferenceKind::Unramified).unwrap();
    assert!(radical_equivalence(&i, &u, B).unwrap());
    assert_eq!(krull_dimension(&i, B).unwrap().krull_dimension, 1);
}

#[test]
fn reference_preconditions() {
    let ctx = gl2(&[0, 1], &[vec![-3], vec![0], vec![1]]);
    assert!(reference_ideals(&ctx, ReferenceKind::Unramified).is_err());
    let ps = reference_ideals(&ctx, ReferenceKind::PrincipalSeries).unwrap();
    assert_eq!(ps.generators.len(), 6);
    let gb = ps.groebner(B).unwrap();
    assert_eq!(gb.len(), 6);
    assert_eq!(krull_dimension(&ps, B).unwrap().krull_dimension, 2);
}

#[test]
fn lemma_small_cases() {
    let f = FiniteField::prime(3).unwrap();
    let i = lemma_ideal(&f, 0, None);
    let s: Vec<String> = i.generators.iter().map(|g| g.to_string()).collect();
    assert_eq!(s, ["u0^2", "2*v0*w0"]);
    assert_eq!(krull_dimension(&i, B).unwrap().krull_dimension, 1);
    let r = dimension_lemma_check(1, &f, 3, 1, B).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn monomial_engines_agree() {
    let r = monomial_crosscheck(20, 11, B).unwrap();
    assert!(r.passed, "{r:?}");
}

