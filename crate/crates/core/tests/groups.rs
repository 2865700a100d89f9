use std::sync::Arc;

use padic_casimir::padic_tower::{build_tower, FieldTower};
use padic_casimir::pvalued_groups::*;
use padic_casimir::rational::{q, ExtQ};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q3() -> Arc<FieldTower> {
    build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap()
}

fn sqrt3() -> Arc<FieldTower> {
    build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap()
}

fn q9() -> Arc<FieldTower> {
    build_tower(3, &[1, 0, 1], &[vec![-3], vec![1]], None).unwrap()
}

fn quat() -> Arc<FieldTower> {
    build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).unwrap()
}

fn contexts() -> Vec<GroupContext> {
    vec![
        build_group_context(GroupCase::Gl2, &q3()).unwrap(),
        build_group_context(GroupCase::Gl2, &sqrt3()).unwrap(),
        build_group_context(GroupCase::Gl2, &q9()).unwrap(),
        build_group_context(GroupCase::Quaternion, &quat()).unwrap(),
    ]
}

#[test]
fn strict_saturation_across_corpus() {
    for ctx in contexts() {
        let p = ctx.p() as i64;
        for w in ctx.omegas() {
            assert!(q(1, p - 1) < w && w < q(p, p - 1), "{w}");
        }
        assert_eq!(ctx.dim(), 4 * ctx.tower().degree());
    }
}

#[test]
fn simple_coordinates() {
    let ctx = build_group_context(GroupCase::Gl2, &q3()).unwrap();
    let c = ctx.coordinates(&ctx.basis_element(0)).unwrap();
    assert!(c.agrees_with(&[1, 0, 0, 0], 3));
    let g = ctx.mul(&ctx.pow(&ctx.basis_element(0), 3), &ctx.basis_element(1));
    let c = ctx.coordinates(&g).unwrap();
    assert!(c.agrees_with(&[3, 1, 0, 0], 3));
    assert!(c.digits.iter().all(|&n| n >= 10));
}

#[test]
fn coordinates_reconstruct_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ctx in contexts() {
        for _ in 0..50 {
            let g = ctx.random_element(&mut rng);
            let c = ctx.coordinates(&g).unwrap();
            let back = ctx.from_coordinates(&c.values);
            // Agreement up to the last resolvable level.
            let quotient = ctx.mul(&ctx.inverse(&back), &g);
            match ctx.omega(&quotient) {
                Ok(w) => assert!(w.is_infinite(), "{} {w}", ctx.tower().label()),
                Err(e) => assert!(matches!(e, padic_casimir::Error::Indeterminate(_))),
            }
            assert_eq!(ctx.omega(&back).unwrap(), ctx.omega(&g).unwrap());
        }
    }
}

#[test]
fn membership_in_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ctx in contexts() {
        let g = ctx.random_element(&mut rng);
        assert!(ctx.in_h(&g).unwrap());
        let r = ctx.ring();
        // [[1, p], [0, 1]] lies in H^{1/p} but not in H.
        let x = ctx.element(Mat2::from_entries(r.one(), r.from_int(3), r.zero(), r.one()));
        assert!(ctx.in_root_group(&x));
        assert!(!ctx.in_h(&x).unwrap());
    }
}

#[test]
fn axioms_hold() {
    for ctx in contexts() {
        let rep = check_p_valuation_axioms(&ctx, 60, 11).unwrap();
        assert!(rep.all_pass(), "{}", serde_json::to_string_pretty(&rep).unwrap());
    }
}

#[test]
fn identity_omega_and_powers() {
    let ctx = build_group_context(GroupCase::Gl2, &q3()).unwrap();
    assert_eq!(ctx.omega(&ctx.pow(&ctx.identity(), 3)).unwrap(), ExtQ::Infinite);
}

#[test]
fn lazard_limit_formula_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ctx in contexts() {
        for _ in 0..10 {
            let g = ctx.random_element(&mut rng);
            let h = ctx.random_element(&mut rng);
            let sum = lazard_add(&ctx, &g, &h).unwrap();
            let (stage, bound) = lazard_limit_stage(&ctx, &g, &h, 2).unwrap();
            let r = ctx.ring();
            let diff = stage.m.sub(r, &sum.m);
            let v = diff.valuation(r).map_or(q(r.prec() as i64, 1), |v| q(v as i64, r.e() as i64));
            assert!(v >= bound, "{v} < {bound}");
        }
    }
}

#[test]
fn lazard_add_is_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for ctx in contexts() {
        let g = ctx.random_element(&mut rng);
        let h = ctx.random_element(&mut rng);
        for m in [2, ctx.p() as u64] {
            let lhs = lazard_add(&ctx, &ctx.pow(&g, m), &ctx.pow(&h, m)).unwrap();
            let rhs = ctx.pow(&lazard_add(&ctx, &g, &h).unwrap(), m);
            assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn omega_of_p_powers(seed in any::<u64>(), n in 1u32..3) {
        let ctx = build_group_context(GroupCase::Gl2, &sqrt3()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ctx.random_element(&mut rng);
        let w = ctx.omega(&g).unwrap();
        let gp = ctx.pow(&g, 3u64.pow(n));
        prop_assert_eq!(ctx.omega(&gp).unwrap(), w.add_q(q(n as i64, 1)));
    }

    #[test]
    fn exp_log_roundtrip(seed in any::<u64>()) {
        let ctx = build_group_context(GroupCase::Quaternion, &quat()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ctx.random_element(&mut rng);
        prop_assert_eq!(ctx.mexp(&ctx.mlog(&g).unwrap()).unwrap(), g);
    }
}
