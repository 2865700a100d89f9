use std::collections::BTreeMap;

use padic_casimir::iwasawa_algebra::{build_algebra, verify_ppower_identity, AlgebraContext, IwasawaSeries};
use padic_casimir::padic_tower::build_tower;
use padic_casimir::polynomial::Poly;
use padic_casimir::pvalued_groups::{build_group_context, GroupCase, GroupContext};
use padic_casimir::rational::q;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(case: GroupCase, e_poly: &[Vec<i64>], quat: Option<i64>) -> GroupContext {
    build_group_context(case, &build_tower(3, &[0, 1], e_poly, quat).unwrap()).unwrap()
}

fn q3() -> GroupContext {
    ctx(GroupCase::Gl2, &[vec![-3], vec![1]], None)
}

fn sqrt3() -> GroupContext {
    ctx(GroupCase::Gl2, &[vec![-3], vec![0], vec![1]], None)
}

fn quat() -> GroupContext {
    ctx(GroupCase::Quaternion, &[vec![-3], vec![1]], Some(-1))
}

/// `b_j b_i = b_i b_j + ([c] - 1)[h_i][h_j]` with `c = h_j h_i h_j⁻¹ h_i⁻¹`.
fn commutator_identity(c: &GroupContext, a: &AlgebraContext) {
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            let (hi, hj) = (c.basis_element(i), c.basis_element(j));
            let comm = c.mul(&c.mul(&hj, &hi), &c.inverse(&c.mul(&hi, &hj)));
            let lhs = a.sub(&a.mul(&a.basis_b(j), &a.basis_b(i)), &a.mul(&a.basis_b(i), &a.basis_b(j)));
            let dc = a.sub(&a.dirac(&comm).unwrap(), &a.one());
            let rhs = a.mul(&a.mul(&dc, &a.dirac(&hi).unwrap()), &a.dirac(&hj).unwrap());
            assert!(a.series_eq(&lhs, &rhs), "pair ({i}, {j})");
        }
    }
}

#[test]
fn commutator_identity_q3() {
    let c = q3();
    commutator_identity(&c, &build_algebra(&c, q(3, 1), 12).unwrap());
}

#[test]
fn commutator_identity_quaternion() {
    let c = quat();
    commutator_identity(&c, &build_algebra(&c, q(3, 1), 12).unwrap());
}

#[test]
fn ppower_lemmas() {
    for (c, level) in [(q3(), q(3, 1)), (sqrt3(), q(5, 2))] {
        let a = build_algebra(&c, level, 8).unwrap();
        for i in 0..c.dim() {
            let r = verify_ppower_identity(&a, i, 1, 0).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}

fn random_mod_p_series(a: &AlgebraContext, rng: &mut ChaCha8Rng) -> IwasawaSeries {
    let cr = a.coeff_ring();
    let caps = a.caps().to_vec();
    let n = rng.gen_range(1..=4);
    // Distinct exponents, so every coefficient stays a unit.
    let mut mons: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    for _ in 0..n {
        let alpha: Vec<u32> = caps.iter().map(|&c| if rng.gen_bool(0.4) { rng.gen_range(0..c.min(3)) } else { 0 }).collect();
        mons.insert(alpha, cr.from_int(rng.gen_range(1..3)));
    }
    a.from_monomials(&mons.into_iter().collect::<Vec<_>>())
}

#[test]
fn radius_rescaling() {
    let c = q3();
    let a = build_algebra(&c, q(3, 1), 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    while checked < 100 {
        let x = random_mod_p_series(&a, &mut rng);
        if x.support_len() == 0 {
            continue;
        }
        let (v0, _, c0) = a.r_valuation_symbol(&x, 0, None).unwrap();
        let (v1, _, c1) = a.r_valuation_symbol(&x, 1, None).unwrap();
        assert_eq!(v1, v0 / q(3, 1));
        assert_eq!(c0.attaining, c1.attaining);
        checked += 1;
    }
}

#[test]
fn graded_ring_is_commutative() {
    let c = q3();
    let a = build_algebra(&c, q(3, 1), 12).unwrap();
    let w = c.omegas();
    for n in 0..2u32 {
        let pn = q(3i64.pow(n), 1);
        for i in 0..c.dim() {
            for j in (i + 1)..c.dim() {
                let comm = a.sub(&a.mul(&a.basis_b(i), &a.basis_b(j)), &a.mul(&a.basis_b(j), &a.basis_b(i)));
                let floor = (w[i] + w[j]) / pn;
                match a.r_valuation_symbol(&comm, n, None) {
                    Ok((v, _, _)) => assert!(v > floor, "({i}, {j}) at N = {n}: {v}"),
                    Err(_) => assert!(a.certified_bound(&comm, n, None) > floor),
                }
            }
        }
    }
}

#[test]
fn ordered_monomials_have_monomial_symbols() {
    let c = q3();
    let a = build_algebra(&c, q(3, 1), 12).unwrap();
    let ring = a.symbol_ring(0);
    let mut seen = Vec::new();
    // r_0-degrees stay below the certified bound.
    for alpha in [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [2, 0, 0, 0], [0, 0, 1, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]] {
        let mut x = a.one();
        let mut expected = Poly::one(&ring);
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                x = a.mul(&x, &a.basis_b(i));
                expected = expected.mul(&Poly::var(&ring, i));
            }
        }
        let (_, s, cert) = a.r_valuation_symbol(&x, 0, None).unwrap();
        assert!(cert.valid);
        assert_eq!(s, expected);
        assert!(!seen.contains(&s));
        seen.push(s);
    }
}

fn sparse(a: &AlgebraContext, seed: u64) -> IwasawaSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cr = a.coeff_ring();
    let caps = a.caps().to_vec();
    let mons: Vec<(Vec<u32>, Vec<u64>)> = (0..rng.gen_range(1..4))
        .map(|_| {
            let alpha = caps.iter().map(|&c| rng.gen_range(0..c)).collect();
            (alpha, cr.from_int(rng.gen_range(-40..40)))
        })
        .collect();
    a.from_monomials(&mons)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(s in any::<u64>()) {
        let c = q3();
        let a = build_algebra(&c, q(2, 1), 10).unwrap();
        let (x, y, z) = (sparse(&a, s), sparse(&a, s ^ 1), sparse(&a, s ^ 2));
        prop_assert!(a.series_eq(&a.mul(&a.mul(&x, &y), &z), &a.mul(&x, &a.mul(&y, &z))));
        prop_assert!(a.series_eq(&a.mul(&x, &a.add(&y, &z)), &a.add(&a.mul(&x, &y), &a.mul(&x, &z))));
        prop_assert!(a.series_eq(&a.mul(&a.add(&y, &z), &x), &a.add(&a.mul(&y, &x), &a.mul(&z, &x))));
    }
}
