use super::*;
use crate::padic_tower::build_tower;
use crate::pvalued_groups::{build_group_context, GroupCase};

fn q3_ctx() -> GroupContext {
    let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap();
    build_group_context(GroupCase::Gl2, &t).unwrap()
}

fn mono(actx: &AlgebraContext, x: &IwasawaSeries) -> Vec<(Vec<u32>, i64)> {
    let cr = actx.coeff_ring();
    let m = cr.modulus() as i64;
    actx.monomials(x, 0, None)
        .unwrap()
        .into_iter()
        .map(|(a, c)| {
            let v = c[0] as i64;
            (a, if v > m / 2 { v - m } else { v })
        })
        .collect()
}

#[test]
fn caps_follow_the_level() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    assert_eq!(a.caps(), &[3, 3, 2, 2]);
    assert_eq!(a.quotient_size_log_p(), 10);
    assert_eq!(build_algebra(&ctx, q(2, 1), 12).unwrap().caps(), &[2, 2, 1, 1]);
    assert!(build_algebra(&ctx, q(5, 4), 12).is_err());
}

#[test]
fn dirac_expansions() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    assert_eq!(mono(&a, &a.dirac(&ctx.identity()).unwrap()), vec![(vec![0, 0, 0, 0], 1)]);
    let h = a.dirac(&ctx.basis_element(1)).unwrap();
    assert_eq!(mono(&a, &h), vec![(vec![0, 0, 0, 0], 1), (vec![0, 1, 0, 0], 1)]);
    let h2 = a.dirac(&ctx.pow(&ctx.basis_element(1), 2)).unwrap();
    assert_eq!(mono(&a, &h2), vec![(vec![0, 0, 0, 0], 1), (vec![0, 1, 0, 0], 2), (vec![0, 2, 0, 0], 1)]);
    let b = a.sub(&h, &a.one());
    assert!(a.series_eq(&a.sub(&h2, &a.one()), &a.add(&a.scale_int(&b, 2), &a.mul(&b, &b))));
}

#[test]
fn ordered_products_are_monomials() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    let b0 = a.basis_b(0);
    let b2 = a.basis_b(2);
    assert_eq!(mono(&a, &a.mul(&b0, &b2)), vec![(vec![1, 0, 1, 0], 1)]);
    assert_eq!(mono(&a, &a.mul(&a.one(), &b2)), mono(&a, &b2));
}

#[test]
fn reversed_product_rule() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (hi, hj) = (ctx.basis_element(i), ctx.basis_element(j));
            let c = ctx.mul(&ctx.mul(&hj, &hi), &ctx.inverse(&ctx.mul(&hi, &hj)));
            let rhs = a.add(
                &a.mul(&a.basis_b(i), &a.basis_b(j)),
                &a.mul(&a.mul(&a.sub(&a.dirac(&c).unwrap(), &a.one()), &a.dirac(&hi).unwrap()), &a.dirac(&hj).unwrap()),
            );
            assert!(a.series_eq(&a.mul(&a.basis_b(j), &a.basis_b(i)), &rhs));
        }
    }
}

#[test]
fn log_of_basis_element_is_single_variable() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    let l = a.log_dirac(&ctx.basis_element(0), 4).unwrap();
    let m = a.monomials(&l, 0, None).unwrap();
    assert!(m.keys().all(|al| al[1..].iter().all(|&x| x == 0)));
    // b - b^2/2 + b^3/3 - b^4/4 scaled by 3 (den = 1).
    let cr = a.coeff_ring();
    assert_eq!(l.den(), 1);
    let c1 = &m[&vec![1, 0, 0, 0]];
    assert_eq!(c1, &cr.from_int(3));
    let c3 = &m[&vec![3, 0, 0, 0]];
    assert_eq!(c3, &cr.from_int(1));
    assert!(a.log_dirac(&ctx.identity(), 5).unwrap().support_len() == 0);
}

#[test]
fn symbol_examples() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    let (v, s, cert) = a.r_valuation_symbol(&a.basis_b(0), 0, None).unwrap();
    assert_eq!(v, q(3, 4));
    assert_eq!(s.to_string(), "e0_0");
    assert!(cert.valid);
    let (v, _, _) = a.r_valuation_symbol(&a.basis_b(0), 1, None).unwrap();
    assert_eq!(v, q(1, 4));
    let three = a.scale_int(&a.one(), 3);
    let (v, s, _) = a.r_valuation_symbol(&three, 2, None).unwrap();
    assert_eq!(v, q(1, 1));
    assert_eq!(s.to_string(), "eps");
}

#[test]
fn ppower_single_variable() {
    let ctx = q3_ctx();
    let a = build_algebra(&ctx, q(3, 1), 12).unwrap();
    let d = a.sub(&a.basis_ppower_dirac(0, 1), &a.one());
    assert_eq!(mono(&a, &d), vec![(vec![1, 0, 0, 0], 3), (vec![2, 0, 0, 0], 3), (vec![3, 0, 0, 0], 1)]);
    for i in 0..4 {
        let rep = verify_ppower_identity(&a, i, 1, 0).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}

#[test]
fn tail_bound_is_a_minimum() {
    // ω = 3/4, N = 0: i·3/4 - v_3(i) over i > 4 is smallest at i = 6 (7/2);
    // over i > 8 at i = 9 (27/4 - 2 = 19/4).
    assert_eq!(log_tail_bound(q(3, 4), 4, 3, 0), q(7, 2));
    assert_eq!(log_tail_bound(q(3, 4), 8, 3, 0), q(19, 4));
}
