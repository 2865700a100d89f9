//! The acceptance suite: thirteen criteria over fixed towers, each reduced
//! to one pass/fail outcome with its measurements.

use std::sync::Arc;
use std::time::{Duration, Instant};

use padic_casimir::finite_field::FiniteField;
use padic_casimir::graded_ideals::{
    casimir_ideal, dimension_lemma_check, krull_dimension, monomial_crosscheck, radical_equivalence, reference_ideals, IdealSpec,
    ReferenceKind, DEFAULT_SPOLY_BUDGET,
};
use padic_casimir::iwasawa_algebra::{build_algebra, verify_ppower_identity, AlgebraContext, IwasawaSeries};
use padic_casimir::lie_symbols::{compare_symbol, frobenius_law, LieKind, RealizationOptions};
use padic_casimir::padic_tower::{build_tower, check_idempotents, ramified_idempotent_data, FieldTower};
use padic_casimir::pvalued_groups::{build_group_context, check_p_valuation_axioms, GroupCase, GroupContext};
use padic_casimir::rational::{format_q, q};
use padic_casimir::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Record, Status};

const BUDGET: usize = DEFAULT_SPOLY_BUDGET;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub measured: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn record(&self) -> Record {
        let name = format!("{:02}-{}", self.id, self.name);
        let status = if self.passed { Status::Pass } else { Status::Fail };
        let witness = (!self.passed).then(|| self.detail.clone());
        Record { name, status, measured: self.measured.clone(), witness, error: None }
    }

    /// `PASS 07 lie-symbols (0.41s): ...`
    pub fn line(&self) -> String {
        format!(
            "{} {:02} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(u64) -> Result<(bool, String, Value)>;

pub const CRITERIA: [(&str, Check); 13] = [
    ("gamma-law", gamma_law),
    ("idempotents", idempotents),
    ("p-valuation-axioms", axioms),
    ("commutator-identity", commutators),
    ("p-power-lemmas", ppower),
    ("radius-rescaling", rescaling),
    ("lie-symbols", lie_symbols),
    ("explicit-ideal", explicit_ideal),
    ("unramified-ideals", unramified_ideals),
    ("principal-series", principal_series),
    ("dimension-lemma", dimension_lemma),
    ("frobenius-law", frobenius),
    ("engine-cross-checks", cross_checks),
];

pub fn run_one(id: usize, seed: u64) -> Outcome {
    let (name, check) = CRITERIA[id - 1];
    let start = Instant::now();
    let (passed, detail, measured) = match check(seed) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}"), Value::Null),
    };
    Outcome { id, name, passed, detail, measured, elapsed: start.elapsed() }
}

/// All criteria, concurrently, in criterion order.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = (1..=CRITERIA.len()).map(|id| s.spawn(move || run_one(id, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    })
}

fn tower(u: &[i64], e: &[Vec<i64>], quat: Option<i64>) -> Result<Arc<FieldTower>> {
    build_tower(3, u, e, quat)
}

/// `Q_3[X^e = 3]`.
fn pure(e: usize) -> Result<Arc<FieldTower>> {
    let mut poly = vec![vec![0]; e + 1];
    poly[0] = vec![-3];
    poly[e] = vec![1];
    tower(&[0, 1], &poly, None)
}

fn gl2(u: &[i64], e: &[Vec<i64>]) -> Result<GroupContext> {
    build_group_context(GroupCase::Gl2, &tower(u, e, None)?)
}

fn q3() -> Result<GroupContext> {
    gl2(&[0, 1], &[vec![-3], vec![1]])
}

fn q9() -> Result<GroupContext> {
    gl2(&[1, 0, 1], &[vec![-3], vec![1]])
}

fn sqrt3() -> Result<GroupContext> {
    gl2(&[0, 1], &[vec![-3], vec![0], vec![1]])
}

fn quaternion() -> Result<GroupContext> {
    build_group_context(GroupCase::Quaternion, &tower(&[0, 1], &[vec![-3], vec![1]], Some(-1))?)
}

fn gamma_law(_: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (e, expected_r) in [(2usize, 0i64), (3, 3), (4, 0)] {
        let d = ramified_idempotent_data(&pure(e)?)?;
        let vals = d.gamma_valuations()?;
        let law = vals.iter().enumerate().all(|(j, v)| v.finite() == Some(q(-(j as i64) - d.r_k, e as i64)));
        let tame = (d.r_k == 0) == (e % 3 != 0);
        ok &= law && tame && d.r_k == expected_r;
        rows.push(json!({ "e": e, "r_k": d.r_k, "gamma_valuations": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "law": law }));
    }
    let r: Vec<i64> = rows.iter().map(|r| r["r_k"].as_i64().unwrap_or(-1)).collect();
    Ok((ok, format!("R_K for e = 2, 3, 4: {r:?}"), Value::Array(rows)))
}

fn idempotents(_: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut digits = Vec::new();
    for u in [vec![0, 1], vec![1, 0, 1], vec![1, 2, 0, 1]] {
        let r = check_idempotents(&tower(&u, &[vec![-3], vec![1]], None)?)?;
        ok &= r.all_pass() && r.verified_digits >= q(30, 1) && r.classes == u.len() - 1;
        digits.push(format_q(r.verified_digits));
        rows.push(serde_json::to_value(&r).expect("serializes"));
    }
    Ok((ok, format!("f = 1, 2, 3 verified to {digits:?} digits"), Value::Array(rows)))
}

fn axioms(seed: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (name, ctx) in [("q3", q3()?), ("q9", q9()?), ("q3_sqrt3", sqrt3()?), ("quaternion_q3", quaternion()?)] {
        let r = check_p_valuation_axioms(&ctx, 500, seed)?;
        let p = ctx.p() as i64;
        let saturated = ctx.omegas().iter().all(|w| q(1, p - 1) < *w && *w < q(p, p - 1));
        if !r.all_pass() || !saturated {
            failures.push(name);
        }
        ok &= r.all_pass() && saturated;
        let undecided: usize = r.axioms.iter().map(|a| a.undecided).sum();
        rows.push(json!({ "context": name, "axioms": r, "strictly_saturated": saturated, "undecided": undecided }));
    }
    let detail = if ok { "4 contexts x 500 samples, no violations, strictly saturated".to_string() } else { format!("violations in {failures:?}") };
    Ok((ok, detail, Value::Array(rows)))
}

fn commutator_pairs(c: &GroupContext, a: &AlgebraContext) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            let (hi, hj) = (c.basis_element(i), c.basis_element(j));
            let comm = c.mul(&c.mul(&hj, &hi), &c.inverse(&c.mul(&hi, &hj)));
            let lhs = a.sub(&a.mul(&a.basis_b(j), &a.basis_b(i)), &a.mul(&a.basis_b(i), &a.basis_b(j)));
            let dc = a.sub(&a.dirac(&comm)?, &a.one());
            let rhs = a.mul(&a.mul(&dc, &a.dirac(&hi)?), &a.dirac(&hj)?);
            if !a.series_eq(&lhs, &rhs) {
                bad.push((i, j));
            }
            checked += 1;
        }
    }
    Ok((checked, bad))
}

fn commutators(_: u64) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let mut total = 0;
    let mut ok = true;
    for (name, c) in [("q3", q3()?), ("quaternion_q3", quaternion()?)] {
        let a = build_algebra(&c, q(3, 1), 12)?;
        let (checked, bad) = commutator_pairs(&c, &a)?;
        total += checked;
        ok &= bad.is_empty();
        rows.push(json!({ "context": name, "pairs": checked, "failing_pairs": bad }));
    }
    Ok((ok, format!("{total} ordered basis pairs at level 3, precision 12"), Value::Array(rows)))
}

fn ppower(_: u64) -> Result<(bool, String, Value)> {
    let mut rows = Vec::new();
    let mut ok = true;
    let mut failing = Vec::new();
    for (name, c, level) in [("q3", q3()?, q(3, 1)), ("q3_sqrt3", sqrt3()?, q(5, 2))] {
        let a = build_algebra(&c, level, 8)?;
        for i in 0..c.dim() {
            let r = verify_ppower_identity(&a, i, 1, 0)?;
            if !r.passed {
                failing.push(format!("{name}:{}", r.label));
            }
            ok &= r.passed;
            rows.push(json!({ "context": name, "report": r }));
        }
    }
    let detail = if ok { format!("{} basis elements", rows.len()) } else { format!("failing {failing:?}") };
    Ok((ok, detail, Value::Array(rows)))
}

fn random_mod_p_series(a: &AlgebraContext, rng: &mut ChaCha8Rng) -> IwasawaSeries {
    let cr = a.coeff_ring();
    let caps = a.caps().to_vec();
    let mut mons = std::collections::BTreeMap::new();
    for _ in 0..rng.gen_range(1..=4) {
        let alpha: Vec<u32> = caps.iter().map(|&c| if rng.gen_bool(0.4) { rng.gen_range(0..c.min(3)) } else { 0 }).collect();
        mons.insert(alpha, cr.from_int(rng.gen_range(1..3)));
    }
    a.from_monomials(&mons.into_iter().collect::<Vec<_>>())
}

fn rescaling(seed: u64) -> Result<(bool, String, Value)> {
    let c = q3()?;
    let a = build_algebra(&c, q(3, 1), 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    while checked < 100 {
        let x = random_mod_p_series(&a, &mut rng);
        if x.support_len() == 0 {
            continue;
        }
        let (v0, s0, c0) = a.r_valuation_symbol(&x, 0, None)?;
        let (v1, _, c1) = a.r_valuation_symbol(&x, 1, None)?;
        if v1 != v0 / q(3, 1) || c0.attaining != c1.attaining {
            failures.push(json!({ "symbol": s0, "v0": format_q(v0), "v1": format_q(v1) }));
        }
        checked += 1;
    }
    let ok = failures.is_empty();
    let detail = if ok { "100 series".to_string() } else { format!("{} mismatches, first {}", failures.len(), failures[0]) };
    Ok((ok, detail, json!({ "series": checked, "seed": seed, "failures": failures })))
}

fn lie_symbols(_: u64) -> Result<(bool, String, Value)> {
    let opts = RealizationOptions::default();
    let mut rows = Vec::new();
    let mut ok = true;
    let mut failing = Vec::new();
    for (name, ctx, radii) in [("q3", q3()?, vec![0, 1]), ("q3_sqrt3", sqrt3()?, vec![0])] {
        for n in radii {
            for kind in [LieKind::Z, LieKind::Delta] {
                let r = compare_symbol(&ctx, kind, 0, n, &opts)?;
                let good = r.matches && r.certificate.valid && r.central == Some(true);
                if !good {
                    failing.push(format!("{name}/{}/N{n}", kind.name()));
                }
                ok &= good;
                rows.push(json!({ "context": name, "kind": kind.name(), "radius": n, "computed": r.computed, "predicted": r.predicted_in_basis, "matches": good }));
            }
        }
    }
    let casimir = compare_symbol(&q3()?, LieKind::Delta, 0, 0, &opts)?;
    let explicit = casimir.computed.to_string() == "2*e0_0*f0_0*eps + 2*h0_0^2" && casimir.computed_valuation == q(5, 2);
    ok &= explicit;
    let detail = if ok {
        format!("{} symbols; scaled Casimir over Q_3: {}", rows.len(), casimir.computed)
    } else {
        format!("failing {failing:?}; scaled Casimir over Q_3: {}", casimir.computed)
    };
    Ok((ok, detail, json!({ "symbols": rows, "casimir_q3": casimir.computed, "casimir_q3_explicit": explicit })))
}

fn explicit_ideal(_: u64) -> Result<(bool, String, Value)> {
    let ctx = sqrt3()?;
    let c = casimir_ideal(&ctx)?;
    let explicit = IdealSpec::parse_text(&c.ring, "z0_0\nz0_1\nh0_1\ne0_0*f0_0\ne0_1*f0_1\nh0_0^2 + 4*(e0_1*f0_0 + e0_0*f0_1)\n")?;
    let equivalent = radical_equivalence(&c, &explicit, BUDGET)?;
    let d = krull_dimension(&c, BUDGET)?.krull_dimension;
    let ok = equivalent && d == 2;
    Ok((ok, format!("radical-equivalent: {equivalent}, Krull dimension {d}"), json!({ "ideal": c, "radical_equivalent": equivalent, "krull_dimension": d })))
}

fn unramified_ideals(_: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut dims = Vec::new();
    let mut rows = Vec::new();
    for u in [vec![0, 1], vec![1, 0, 1], vec![1, 2, 0, 1]] {
        let ctx = gl2(&u, &[vec![-3], vec![1]])?;
        let f = u.len() - 1;
        let c = casimir_ideal(&ctx)?;
        let reference = reference_ideals(&ctx, ReferenceKind::Unramified)?;
        let d = krull_dimension(&c, BUDGET)?.krull_dimension;
        let equivalent = radical_equivalence(&c, &reference, BUDGET)?;
        ok &= d == f && equivalent;
        dims.push(d);
        rows.push(json!({ "f": f, "krull_dimension": d, "matches_reference": equivalent, "ideal": c.to_text() }));
    }
    Ok((ok, format!("dimensions for f = 1, 2, 3: {dims:?}"), Value::Array(rows)))
}

fn principal_series(_: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, ctx) in [("q3", q3()?), ("q9", q9()?), ("q3_sqrt3", sqrt3()?)] {
        let ef = ctx.tower().e() * ctx.tower().f();
        let d = krull_dimension(&reference_ideals(&ctx, ReferenceKind::PrincipalSeries)?, BUDGET)?.krull_dimension;
        ok &= d == ef;
        rows.push(json!({ "context": name, "krull_dimension": d, "e_times_f": ef }));
    }
    let summary: Vec<String> = rows.iter().map(|r| format!("{}={}", r["context"].as_str().unwrap_or(""), r["krull_dimension"])).collect();
    Ok((ok, format!("dimensions {}", summary.join(", ")), Value::Array(rows)))
}

fn dimension_lemma(seed: u64) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    let mut worst = Vec::new();
    for field in [FiniteField::prime(3)?, FiniteField::new(3, &[1, 0, 1])?] {
        for n in 0..3 {
            let r = dimension_lemma_check(n, &field, 25, seed, BUDGET)?;
            ok &= r.passed && r.specialized_dimensions.len() == 25 && r.generic_dimension.is_some() == (n <= 1);
            worst.push(format!("F_{} n={n}: {}<={}", field.size(), r.worst, r.bound));
            rows.push(serde_json::to_value(&r).expect("serializes"));
        }
    }
    Ok((ok, worst.join(", "), Value::Array(rows)))
}

fn frobenius(_: u64) -> Result<(bool, String, Value)> {
    let ctx = q9()?;
    let mut ok = true;
    let mut rows = Vec::new();
    for kind in [LieKind::Delta, LieKind::Z] {
        for k in 0..ctx.tower().f() {
            let r = frobenius_law(&ctx, kind, k, 1)?;
            ok &= r.variables_raised;
            rows.push(serde_json::to_value(&r).expect("serializes"));
        }
    }
    Ok((ok, format!("{} coefficient families over Q_9", rows.len()), Value::Array(rows)))
}

fn cross_checks(seed: u64) -> Result<(bool, String, Value)> {
    let mono = monomial_crosscheck(20, seed, BUDGET)?;
    let ctx = quaternion()?;
    let d = krull_dimension(&casimir_ideal(&ctx)?, BUDGET)?.krull_dimension;
    let bound = ctx.tower().degree();
    let ok = mono.passed && d <= bound;
    Ok((
        ok,
        format!("20 monomial ideals agree: {}; quaternion Casimir dimension {d} <= {bound}", mono.passed),
        json!({ "monomial": mono, "quaternion_dimension": d }),
    ))
}
