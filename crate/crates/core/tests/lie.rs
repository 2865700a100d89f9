use padic_casimir::lie_symbols::*;
use padic_casimir::padic_tower::build_tower;
use padic_casimir::pvalued_groups::{build_group_context, GroupCase, GroupContext};
use padic_casimir::rational::q;

fn corpus() -> Vec<(&'static str, GroupContext)> {
    let t = |u: &[i64], e: &[Vec<i64>], a| build_tower(3, u, e, a).unwrap();
    vec![
        ("q3", build_group_context(GroupCase::Gl2, &t(&[0, 1], &[vec![-3], vec![1]], None)).unwrap()),
        ("q9", build_group_context(GroupCase::Gl2, &t(&[1, 0, 1], &[vec![-3], vec![1]], None)).unwrap()),
        ("q3_sqrt3", build_group_context(GroupCase::Gl2, &t(&[0, 1], &[vec![-3], vec![0], vec![1]], None)).unwrap()),
        ("quaternion", build_group_context(GroupCase::Quaternion, &t(&[0, 1], &[vec![-3], vec![1]], Some(-1))).unwrap()),
    ]
}

#[test]
fn computed_symbols_match_closed_forms() {
    for (name, ctx) in corpus() {
        let f = ctx.tower().f();
        for k in 0..f {
            for n in [0, f as u32] {
                for kind in [LieKind::E, LieKind::F, LieKind::H, LieKind::Z, LieKind::Delta] {
                    let r = compare_symbol(&ctx, kind, k, n, &RealizationOptions::default()).unwrap();
                    assert!(r.certificate.valid, "{name} {kind:?} k={k} N={n}");
                    assert!(r.matches, "{name} {kind:?} k={k} N={n}: {} vs {}", r.computed, r.predicted_in_basis);
                    if matches!(kind, LieKind::Z | LieKind::Delta) {
                        assert_eq!(r.central, Some(true), "{name} {kind:?} k={k} N={n}");
                    }
                }
            }
        }
    }
}

// p^6 Δ over Q_3 at r_0: ½h² + 2εef, with ½ = 2 in F_3.
#[test]
fn unramified_casimir_symbol() {
    let (_, ctx) = corpus().remove(0);
    let r = compare_symbol(&ctx, LieKind::Delta, 0, 0, &RealizationOptions::default()).unwrap();
    assert_eq!(r.computed_valuation, q(5, 2));
    assert_eq!(r.computed.to_string(), "2*e0_0*f0_0*eps + 2*h0_0^2");
}

#[test]
fn frobenius_power_law() {
    let (_, ctx) = corpus().remove(1);
    for kind in [LieKind::Delta, LieKind::Z] {
        for k in 0..2 {
            let r = frobenius_law(&ctx, kind, k, 1).unwrap();
            assert!(r.variables_raised && r.frobenius_power, "{r:?}");
        }
    }
}

#[test]
fn explicit_overrides_are_respected() {
    let (_, ctx) = corpus().remove(0);
    let opts = RealizationOptions { level: Some(q(4, 1)), precision: Some(5), terms: Some(1) };
    let plan = plan_realization(&ctx, LieKind::Delta, 0, 0, &opts).unwrap();
    assert_eq!((plan.level, plan.precision, plan.terms), (q(4, 1), 5, 1));
    assert!(compare_symbol(&ctx, LieKind::Delta, 0, 0, &opts).unwrap().matches);
    // More log terms bring 1/3 denominators; the planner compensates.
    let more = RealizationOptions { terms: Some(3), ..Default::default() };
    let plan = plan_realization(&ctx, LieKind::Delta, 0, 0, &more).unwrap();
    assert!(plan.precision > 5);
    assert!(compare_symbol(&ctx, LieKind::Delta, 0, 0, &more).unwrap().matches);
    let short = RealizationOptions { level: Some(q(4, 1)), precision: Some(4), terms: Some(3) };
    assert!(matches!(compare_symbol(&ctx, LieKind::Delta, 0, 0, &short), Err(padic_casimir::Error::Uncertified(_))));
}

#[test]
fn unsupported_requests() {
    let (_, ctx) = corpus().remove(0);
    assert!(scaled_generator(&ctx, LieKind::Delta, 0, 0, &RealizationOptions::default()).is_err());
    assert!(compare_symbol(&ctx, LieKind::Z, 1, 0, &RealizationOptions::default()).is_err());
    assert!(casimir_coefficients(&ctx, LieKind::E, 0, 0).is_err());
}

#[test]
fn casimir_coefficients_are_homogeneous() {
    for (_, ctx) in corpus() {
        let c = casimir_coefficients(&ctx, LieKind::Delta, 0, 0).unwrap();
        assert_eq!(c.coefficients.len(), 2 * ctx.tower().e());
        assert!(c.coefficients.iter().all(|x| x.is_homogeneous()));
    }
}
