//! Realization of `p^{N+2} ϖ^{e+R} x_ρ` and of `(p^{N+2} ϖ^{e+R})^2 Δ_ρ`
//! in the truncated algebra, with bookkeeping of the log truncation.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::predict::{predicted_symbol, to_basis_variables};
use super::{basis_index, LieData, LieKind};
use crate::error::{Error, Result};
use crate::int_ring::{IntRing, RElem};
use crate::iwasawa_algebra::{build_algebra, log_tail_bound, tail_bounds, AlgebraContext, IwasawaSeries, SymbolCertificate};
use crate::padic_tower::{frobenius, FieldElement};
use crate::polynomial::Poly;
use crate::pvalued_groups::{GroupCase, GroupContext};
use crate::rational::{ceil, floor, q, vp_u64, Q};

/// Overrides for the automatically chosen quotient level, coefficient
/// precision and number of logarithm terms.
#[derive(Clone, Debug, Default)]
pub struct RealizationOptions {
    pub level: Option<Q>,
    pub precision: Option<u32>,
    pub terms: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationPlan {
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub level: Q,
    pub precision: u32,
    pub terms: usize,
    /// Degree of the closed-form symbol.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub predicted_valuation: Q,
    /// Lower bound for the `r_N`-valuation of the discarded log terms.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub log_tail: Q,
}

/// One summand `c · ψ(log x^{p^N})` of a scaled generator.
struct Term {
    index: usize,
    base: FieldElement,
    half: bool,
    /// `0`, or the sign of a `1/√a` factor.
    sqrt_inv: i8,
}

fn generator_terms(ctx: &GroupContext, data: &LieData, kind: LieKind, k: usize) -> Result<Vec<Term>> {
    let tower = &data.tower;
    let (f, e) = (tower.f(), tower.e());
    let dec = &data.decomposition;
    let varpi = FieldElement::varpi(tower);
    let coeff = |i: usize, j: usize, extra: usize| -> Result<FieldElement> {
        let x = frobenius(tower, &dec.mu[j].mul(&dec.beta[i]), k as i64)?;
        Ok(x.mul(&varpi.pow((e - 1 - j + extra) as u64)))
    };
    let mut out = Vec::new();
    for j in 0..e {
        for i in 0..f {
            match (ctx.case(), kind) {
                (GroupCase::Gl2, LieKind::E) => {
                    out.push(Term { index: basis_index(ctx, 'e', i, j), base: coeff(i, j, 1)?, half: false, sqrt_inv: 0 })
                }
                (GroupCase::Gl2, x) => {
                    let c = x.name().chars().next().unwrap();
                    out.push(Term { index: basis_index(ctx, c, i, j), base: coeff(i, j, 0)?, half: false, sqrt_inv: 0 })
                }
                (GroupCase::Quaternion, LieKind::E | LieKind::F) => {
                    let (extra, sign) = if kind == LieKind::E { (0, 1) } else { (1, -1) };
                    out.push(Term { index: basis_index(ctx, 'a', i, j), base: coeff(i, j, extra)?, half: true, sqrt_inv: 0 });
                    out.push(Term { index: basis_index(ctx, 'b', i, j), base: coeff(i, j, extra)?, half: true, sqrt_inv: sign });
                }
                (GroupCase::Quaternion, LieKind::H) => {
                    out.push(Term { index: basis_index(ctx, 'c', i, j), base: coeff(i, j, 0)?, half: false, sqrt_inv: 1 })
                }
                (GroupCase::Quaternion, _) => {
                    out.push(Term { index: basis_index(ctx, 'z', i, j), base: coeff(i, j, 0)?, half: false, sqrt_inv: 0 })
                }
            }
        }
    }
    Ok(out)
}

fn term_valuation(t: &Term) -> Result<Q> {
    t.base
        .valuation()?
        .finite()
        .ok_or_else(|| Error::SelfCheck("vanishing generator coefficient".into()))
}

/// The coefficient of a term in the algebra's coefficient ring.
fn ring_coefficient(cr: &IntRing, case: GroupCase, t: &Term) -> Result<RElem> {
    let coords = t.base.integral_coords()?;
    let mut c = match case {
        GroupCase::Gl2 => cr.from_big_coords(&coords),
        GroupCase::Quaternion => {
            // K has f = 1; K[√a] interleaves the √a-coordinate.
            let mut wide = vec![BigInt::from(0); 2 * coords.len()];
            for (j, x) in coords.iter().enumerate() {
                wide[2 * j] = x.clone();
            }
            cr.from_big_coords(&wide)
        }
    };
    if t.half {
        let (h, d) = cr.scaled_reciprocal(2);
        debug_assert_eq!(d, 0);
        c = cr.mul(&c, &h);
    }
    if t.sqrt_inv != 0 {
        let s = cr.inverse(&cr.basis_element(1, 0)).expect("√a is a unit");
        c = cr.scale(&cr.mul(&c, &s), t.sqrt_inv as i64);
    }
    Ok(c)
}

/// A series (absent in dry runs) with a lower bound `low` on the
/// valuation of what was computed and `tail` on what was discarded.
struct Tracked {
    series: Option<IwasawaSeries>,
    low: Q,
    tail: Q,
}

struct Realizer<'a> {
    ctx: &'a GroupContext,
    data: LieData,
    algebra: Option<&'a AlgebraContext>,
    class: usize,
    radius: u32,
    terms: usize,
}

impl Realizer<'_> {
    fn generator(&self, kind: LieKind) -> Result<Tracked> {
        let p = self.ctx.p();
        let terms = generator_terms(self.ctx, &self.data, kind, self.class)?;
        let mut low: Option<Q> = None;
        let mut tail: Option<Q> = None;
        let mut series = self.algebra.map(|a| a.zero());
        for t in &terms {
            let v = term_valuation(t)?;
            if v < q(0, 1) {
                return Err(Error::SelfCheck(format!("generator coefficient of valuation {v} is not integral")));
            }
            let w = self.ctx.basis()[t.index].omega;
            let lo = v + w;
            let tl = v + log_tail_bound(w, self.terms, p, 0);
            low = Some(low.map_or(lo, |x| x.min(lo)));
            tail = Some(tail.map_or(tl, |x| x.min(tl)));
            if let (Some(a), Some(acc)) = (self.algebra, series.as_mut()) {
                let g = self.ctx.pow(&self.ctx.basis_element(t.index), (p as u64).pow(self.radius));
                let l = a.log_dirac(&g, self.terms)?;
                let c = ring_coefficient(a.coeff_ring(), self.ctx.case(), t)?;
                *acc = a.add(acc, &a.scale(&l, &c, 0));
            }
        }
        Ok(Tracked { series, low: low.unwrap(), tail: tail.unwrap() })
    }

    fn mul(&self, x: &Tracked, y: &Tracked) -> Tracked {
        let series = match (self.algebra, &x.series, &y.series) {
            (Some(a), Some(s), Some(t)) => Some(a.mul(s, t)),
            _ => None,
        };
        let tail = (x.low + y.tail).min(x.tail + y.low).min(x.tail + y.tail);
        Tracked { series, low: x.low + y.low, tail }
    }

    fn add(&self, x: &Tracked, y: &Tracked) -> Tracked {
        let series = match (self.algebra, &x.series, &y.series) {
            (Some(a), Some(s), Some(t)) => Some(a.add(s, t)),
            _ => None,
        };
        Tracked { series, low: x.low.min(y.low), tail: x.tail.min(y.tail) }
    }

    /// Multiply by `c` of valuation `v`.
    fn scale(&self, x: &Tracked, c: impl Fn(&AlgebraContext, &IwasawaSeries) -> IwasawaSeries, v: Q) -> Tracked {
        let series = match (self.algebra, &x.series) {
            (Some(a), Some(s)) => Some(c(a, s)),
            _ => None,
        };
        Tracked { series, low: x.low + v, tail: x.tail + v }
    }

    fn realize(&self, kind: LieKind) -> Result<Tracked> {
        if kind != LieKind::Delta {
            return self.generator(kind);
        }
        let p = self.ctx.p() as i64;
        let e = self.data.tower.e() as u32;
        let r = self.data.decomposition.r_k as u32;
        let sh = self.generator(LieKind::H)?;
        let sf = self.generator(LieKind::F)?;
        let se = self.generator(LieKind::E)?;
        let h2 = self.mul(&sh, &sh);
        let half_h2 = self.scale(&h2, |a, s| a.div_int(s, 2), q(0, 1));
        // s·(s h) with s = p^{N+2} ϖ^{e+R}
        let radius = self.radius;
        let linear = self.scale(
            &sh,
            |a, s| {
                let cr = a.coeff_ring();
                let c = cr.mul_varpi_pow(&cr.pow(&cr.from_int(p), (radius + 2) as u64), e + r);
                a.scale(s, &c, 0)
            },
            q((radius + 2) as i64, 1) + q((e + r) as i64, e as i64),
        );
        let fe = self.mul(&sf, &se);
        let two_fe = self.scale(&fe, |a, s| a.scale_int(s, 2), q(0, 1));
        Ok(self.add(&self.add(&half_h2, &linear), &two_fe))
    }
}

/// Choose the quotient level, precision and number of log terms so that the
/// symbol of the closed-form degree can be certified.
pub fn plan_realization(ctx: &GroupContext, kind: LieKind, k: usize, n: u32, opts: &RealizationOptions) -> Result<RealizationPlan> {
    let data = LieData::new(ctx)?;
    data.check_class(k)?;
    let predicted_valuation = predicted_symbol(ctx, kind, k, n)?
        .weighted_degrees()
        .first()
        .copied()
        .ok_or_else(|| Error::SelfCheck("closed form vanishes".into()))?;
    let p = ctx.p() as u64;
    let dry = |terms: usize| -> Result<Q> {
        let r = Realizer { ctx, data: LieData::new(ctx)?, algebra: None, class: k, radius: n, terms };
        Ok(r.realize(kind)?.tail)
    };
    let terms = match opts.terms {
        Some(t) if t >= 1 => t,
        Some(_) => return Err(Error::Config("at least one log term is needed".into())),
        None => {
            let mut found = None;
            for t in 1..=64 {
                if dry(t)? > predicted_valuation {
                    found = Some(t);
                    break;
                }
            }
            found.ok_or_else(|| Error::Budget("no log truncation reaches the symbol degree".into()))?
        }
    };
    let log_tail = dry(terms)?;
    let maxv = (1..=terms as u64).map(|i| vp_u64(i, p)).max().unwrap_or(0) as i64;
    let deg = kind.degree() as i64;
    let floor_estimate = q(-deg * maxv, 1);
    let omegas = ctx.omegas();
    let level = match opts.level {
        Some(l) => l,
        None => {
            let mut found = None;
            for m in 1..=200i64 {
                let level = q(m, 2);
                let caps: Vec<i64> = omegas.iter().map(|w| ceil(level - *w)).collect();
                if caps.iter().any(|&c| c <= n as i64) {
                    continue;
                }
                let caps: Vec<u32> = caps.into_iter().map(|c| c as u32).collect();
                let (_, cut) = tail_bounds(&omegas, &caps, ctx.p(), n);
                if floor_estimate + cut > predicted_valuation {
                    found = Some(level);
                    break;
                }
            }
            found.ok_or_else(|| Error::Budget("no quotient level certifies the symbol degree".into()))?
        }
    };
    let precision = opts
        .precision
        .unwrap_or_else(|| (floor(predicted_valuation + q(deg * maxv, 1)) + 2).max(2) as u32);
    Ok(RealizationPlan { level, precision, terms, predicted_valuation, log_tail })
}

/// A realized scaled Lie or Casimir element.
#[derive(Clone, Debug)]
pub struct ScaledLieElement {
    pub kind: LieKind,
    pub class: usize,
    pub radius: u32,
    pub plan: RealizationPlan,
    pub algebra: Arc<AlgebraContext>,
    pub series: IwasawaSeries,
    /// Lower bound for the valuation of the computed series.
    pub low: Q,
    /// Lower bound for the valuation of the discarded log terms.
    pub tail: Q,
}

fn realize(ctx: &GroupContext, kind: LieKind, k: usize, n: u32, opts: &RealizationOptions) -> Result<ScaledLieElement> {
    let plan = plan_realization(ctx, kind, k, n, opts)?;
    let algebra = Arc::new(build_algebra(ctx, plan.level, plan.precision)?);
    let r = Realizer { ctx, data: LieData::new(ctx)?, algebra: Some(&algebra), class: k, radius: n, terms: plan.terms };
    let t = r.realize(kind)?;
    let series = t.series.expect("realized");
    Ok(ScaledLieElement { kind, class: k, radius: n, plan, algebra: algebra.clone(), series, low: t.low, tail: t.tail })
}

/// `p^{N+2} ϖ^{e+R} x_ρ` for `x ∈ {e, f, h, z}`, realized as an integral
/// combination of `ψ(log x_{i,j}^{p^N})`.
pub fn scaled_generator(ctx: &GroupContext, kind: LieKind, k: usize, n: u32, opts: &RealizationOptions) -> Result<ScaledLieElement> {
    if kind == LieKind::Delta {
        return Err(Error::Config("use casimir_series for delta".into()));
    }
    realize(ctx, kind, k, n, opts)
}

/// `(p^{N+2} ϖ^{e+R})^2 Δ_ρ = ½(s h)^2 + s·(s h) + 2 (s f)(s e)`.
pub fn casimir_series(ctx: &GroupContext, k: usize, n: u32, opts: &RealizationOptions) -> Result<ScaledLieElement> {
    realize(ctx, LieKind::Delta, k, n, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolComparison {
    pub field: String,
    pub case: String,
    pub kind: LieKind,
    pub class: usize,
    pub radius: u32,
    pub plan: RealizationPlan,
    pub support: usize,
    pub predicted: Poly,
    pub predicted_in_basis: Poly,
    pub computed: Poly,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub computed_valuation: Q,
    pub certificate: SymbolCertificate,
    /// For central elements: the commutator with every `[h_i]` vanishes
    /// below `central_bound`.
    pub central: Option<bool>,
    #[serde(serialize_with = "ser_opt")]
    pub central_bound: Option<Q>,
    pub matches: bool,
}

fn ser_opt<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&crate::rational::format_q(*v)),
        None => s.serialize_none(),
    }
}

/// Realize, certify, and compare with the closed form.
pub fn compare_symbol(ctx: &GroupContext, kind: LieKind, k: usize, n: u32, opts: &RealizationOptions) -> Result<SymbolComparison> {
    let el = realize(ctx, kind, k, n, opts)?;
    let a = &el.algebra;
    let predicted = predicted_symbol(ctx, kind, k, n)?;
    let target = a.symbol_ring(n);
    let predicted_in_basis = to_basis_variables(ctx, &predicted, &target)?;
    let (computed_valuation, computed, certificate) = a.r_valuation_symbol(&el.series, n, Some(el.tail))?;
    let (central, central_bound) = if matches!(kind, LieKind::Delta | LieKind::Z) {
        let mut ok = true;
        let mut bound: Option<Q> = None;
        for i in 0..a.dim() {
            let d = a.dirac(&ctx.basis_element(i))?;
            let comm = a.sub(&a.mul(&el.series, &d), &a.mul(&d, &el.series));
            let b = a.certified_bound(&comm, n, Some(el.tail));
            bound = Some(bound.map_or(b, |x: Q| x.min(b)));
            ok &= a.valuation_at_least(&comm, n, b)?;
        }
        (Some(ok), bound)
    } else {
        (None, None)
    };
    let matches = computed_valuation == el.plan.predicted_valuation && computed == predicted_in_basis;
    Ok(SymbolComparison {
        field: ctx.tower().label(),
        case: format!("{:?}", ctx.case()).to_lowercase(),
        kind,
        class: k,
        radius: n,
        plan: el.plan.clone(),
        support: el.series.support_len(),
        predicted,
        predicted_in_basis,
        computed,
        computed_valuation,
        certificate,
        central,
        central_bound,
        matches,
    })
}
