use super::*;
use crate::padic_tower::build_tower;
use crate::pvalued_groups::{build_group_context, GroupCase};
use crate::rational::q;

fn gl2(u: &[i64], e: &[Vec<i64>]) -> GroupContext {
    build_group_context(GroupCase::Gl2, &build_tower(3, u, e, None).unwrap()).unwrap()
}

fn q3() -> GroupContext {
    gl2(&[0, 1], &[vec![-3], vec![1]])
}

fn sqrt3() -> GroupContext {
    gl2(&[0, 1], &[vec![-3], vec![0], vec![1]])
}

fn q9() -> GroupContext {
    gl2(&[1, 0, 1], &[vec![-3], vec![1]])
}

fn quat() -> GroupContext {
    build_group_context(GroupCase::Quaternion, &build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).unwrap()).unwrap()
}

#[test]
fn kinds_parse() {
    assert_eq!(LieKind::parse("Casimir").unwrap(), LieKind::Delta);
    assert_eq!(LieKind::parse("h").unwrap().name(), "h");
    assert!(LieKind::parse("x").is_err());
}

#[test]
fn closed_forms_over_q3() {
    let ctx = q3();
    assert_eq!(predicted_symbol(&ctx, LieKind::Z, 0, 0).unwrap().to_string(), "z0_0");
    let d = predicted_symbol(&ctx, LieKind::Delta, 0, 0).unwrap();
    assert_eq!(d.weighted_degrees(), vec![q(5, 2)]);
    let c = casimir_coefficients(&ctx, LieKind::Delta, 0, 0).unwrap();
    assert_eq!(c.coefficients.len(), 2);
    assert_eq!(c.coefficients[1].to_string(), "2*e0_0*f0_0");
    assert_eq!(c.coefficients[0].weighted_degrees(), vec![q(5, 2)]);
}

#[test]
fn out_of_range_class() {
    assert!(predicted_symbol(&q3(), LieKind::E, 1, 0).is_err());
}

#[test]
fn plan_is_small_for_q3() {
    let plan = plan_realization(&q3(), LieKind::Delta, 0, 0, &RealizationOptions::default()).unwrap();
    assert_eq!(plan.terms, 1);
    assert_eq!(plan.predicted_valuation, q(5, 2));
    assert!(plan.log_tail > q(5, 2));
}

#[test]
fn casimir_symbol_over_q3() {
    let r = compare_symbol(&q3(), LieKind::Delta, 0, 0, &RealizationOptions::default()).unwrap();
    assert!(r.certificate.valid, "{:?}", r.certificate);
    assert_eq!(r.computed_valuation, q(5, 2));
    assert_eq!(r.computed, r.predicted_in_basis, "{} vs {}", r.computed, r.predicted_in_basis);
    assert_eq!(r.central, Some(true));
    assert!(r.matches);
}

#[test]
fn generators_over_q3() {
    for kind in [LieKind::E, LieKind::F, LieKind::H, LieKind::Z] {
        let r = compare_symbol(&q3(), kind, 0, 0, &RealizationOptions::default()).unwrap();
        assert!(r.matches, "{kind:?}: {} vs {}", r.computed, r.predicted_in_basis);
    }
}

#[test]
fn realized_series_has_no_constant_term() {
    let el = casimir_series(&q3(), 0, 0, &RealizationOptions::default()).unwrap();
    let a = &el.algebra;
    let m = a.monomials(&el.series, 0, None).unwrap();
    let zero = vec![0; a.dim()];
    assert!(m.get(&zero).is_none_or(|c| a.coeff_ring().is_zero(c)));
}

#[test]
fn casimir_symbol_over_sqrt3() {
    let ctx = sqrt3();
    let r = compare_symbol(&ctx, LieKind::Delta, 0, 0, &RealizationOptions::default()).unwrap();
    assert_eq!(r.plan.predicted_valuation, q(11, 4));
    assert!(r.matches, "{} vs {}", r.computed, r.predicted_in_basis);
    assert_eq!(r.central, Some(true));
}

#[test]
fn frobenius_law_over_q9() {
    let ctx = q9();
    for kind in [LieKind::Delta, LieKind::Z] {
        for k in 0..2 {
            let r = frobenius_law(&ctx, kind, k, 1).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}

#[test]
fn quaternion_casimir() {
    let ctx = quat();
    let r = compare_symbol(&ctx, LieKind::Delta, 0, 0, &RealizationOptions::default()).unwrap();
    assert!(r.matches, "{} vs {}", r.computed, r.predicted_in_basis);
}

fn casimir_symbol(ctx: &GroupContext, n: u32) -> String {
    let r = compare_symbol(ctx, LieKind::Delta, 0, n, &RealizationOptions::default()).unwrap();
    assert!(r.matches && r.certificate.valid && r.central == Some(true), "{r:?}");
    r.computed.to_string()
}

// ½ ≡ 2 mod 3; every variable below is a single basis symbol.
#[test]
fn frozen_casimir_symbols() {
    assert_eq!(casimir_symbol(&q3(), 0), "2*e0_0*f0_0*eps + 2*h0_0^2");
    assert_eq!(casimir_symbol(&q3(), 1), "2*e0_0^3*f0_0^3*eps + 2*h0_0^6");
    assert_eq!(
        casimir_symbol(&sqrt3(), 0),
        "2*e0_0*f0_0*eps^3 + 2*e0_1*f0_0*eps^2 + 2*e0_0*f0_1*eps^2 + 2*h0_0^2*eps^2 + 2*e0_1*f0_1*eps + h0_0*h0_1*eps + 2*h0_1^2"
    );
    // w0 w1 = ¼(a - i b)(a + i b) and h² = -c² with √-1 = i.
    assert_eq!(casimir_symbol(&quat(), 0), "2*a0_0^2*eps + 2*b0_0^2*eps + c0_0^2");
}

#[test]
fn frozen_sqrt3_coefficients() {
    let c = casimir_coefficients(&sqrt3(), LieKind::Delta, 0, 0).unwrap();
    let s: Vec<String> = c.coefficients.iter().map(|x| x.to_string()).collect();
    assert_eq!(s, ["2*h0_1^2", "2*e0_1*f0_1 + h0_0*h0_1", "2*e0_1*f0_0 + 2*e0_0*f0_1 + 2*h0_0^2", "2*e0_0*f0_0"]);
}

