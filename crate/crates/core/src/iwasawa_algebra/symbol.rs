//! `r_N`-valuations, certified principal symbols and the `p`-power
//! congruences.

use std::sync::Arc;

use serde::Serialize;

use super::{AlgebraContext, IwasawaSeries};
use crate::error::{Error, Result};
use crate::polynomial::{Mono, Poly, PolyRing};
use crate::rational::{q, Q};

/// Evidence that no truncation or precision loss can reach the degree of
/// a computed symbol.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolCertificate {
    pub radius: u32,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub valuation: Q,
    /// `min_i ω_i p^{n_i} / p^N`.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub tail_box: Q,
    /// `min_i min_k (k + ω_i p^{n_i - k} / p^N)`: the valuation of
    /// `[h_i^{p^{n_i}}] - 1`.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub tail_cut: Q,
    /// Coefficient floor of the series.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub floor: Q,
    /// `M - den/e`.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub precision_bound: Q,
    #[serde(serialize_with = "ser_opt_q")]
    pub extra_tail: Option<Q>,
    /// Every term that could perturb the symbol has valuation at least this.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub bound: Q,
    pub attaining: Vec<Vec<u32>>,
    pub valid: bool,
}

/// `(T_box, T_cut)` for the given values `ω_i` and caps `n_i`:
/// `T_box = min_i ω_i p^{n_i} / p^N` and
/// `T_cut = min_i min_{k ≤ n_i} (k + ω_i p^{n_i - k} / p^N)`.
pub fn tail_bounds(omegas: &[Q], caps: &[u32], p: u32, radius: u32) -> (Q, Q) {
    let p = p as i64;
    let pn = q(p.pow(radius), 1);
    let mut tbox: Option<Q> = None;
    let mut tcut: Option<Q> = None;
    for (w, &n) in omegas.iter().zip(caps) {
        let b = *w * q(p.pow(n), 1) / pn;
        tbox = Some(tbox.map_or(b, |t| t.min(b)));
        for k in 0..=n {
            let c = q(k as i64, 1) + *w * q(p.pow(n - k), 1) / pn;
            tcut = Some(tcut.map_or(c, |t| t.min(c)));
        }
    }
    (tbox.unwrap(), tcut.unwrap())
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&crate::rational::format_q(*v)),
        None => s.serialize_none(),
    }
}

impl AlgebraContext {
    /// The graded ring of symbols at radius `r_N`: one variable per basis
    /// element (degree `ω_i / p^N`) and `eps` (degree `1/e`).
    pub fn symbol_ring(&self, radius: u32) -> Arc<PolyRing> {
        let pn = q((self.group.p() as i64).pow(radius), 1);
        let mut names: Vec<String> = self.group.basis().iter().map(|b| b.label()).collect();
        let mut weights: Vec<Q> = self.omegas().into_iter().map(|w| w / pn).collect();
        names.push("eps".into());
        weights.push(q(1, self.coeff.e() as i64));
        PolyRing::new(self.coeff.residue_field().clone(), names, Some(weights))
    }

    /// `(T_box, T_cut)` at radius `r_N`.
    pub fn tail_bounds(&self, radius: u32) -> (Q, Q) {
        tail_bounds(&self.omegas(), &self.caps, self.group.p(), radius)
    }

    /// Lower bound for the `r_N`-valuation of everything the stored form of
    /// `x` cannot see: quotient truncation, coefficient precision and the
    /// caller's own truncation.
    pub fn certified_bound(&self, x: &IwasawaSeries, radius: u32, extra_tail: Option<Q>) -> Q {
        let (_, tail_cut) = self.tail_bounds(radius);
        let precision_bound = q(self.coeff.prec() as i64, 1) - q(x.den as i64, self.coeff.e() as i64);
        let bound = (x.floor + tail_cut).min(precision_bound);
        extra_tail.map_or(bound, |t| bound.min(t))
    }

    /// True when every monomial of `x` below `bound` vanishes, i.e. the
    /// `r_N`-valuation of `x` is at least `bound` as far as it is visible.
    pub fn valuation_at_least(&self, x: &IwasawaSeries, radius: u32, bound: Q) -> Result<bool> {
        if x.terms.is_empty() {
            return Ok(true);
        }
        let cr = &self.coeff;
        let e = cr.e() as i64;
        let pn = q((self.group.p() as i64).pow(radius), 1);
        let omegas = self.omegas();
        let prune = (bound - x.floor.min(bound)).max(q(0, 1));
        let mons = self.monomials(x, radius, Some(prune))?;
        for (alpha, c) in &mons {
            let Some(t) = cr.valuation(c) else { continue };
            let tau = alpha.iter().zip(&omegas).fold(q(0, 1), |acc, (&a, &w)| acc + w * q(a as i64, 1)) / pn;
            if q(t as i64 - x.den as i64, e) + tau < bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The `r_N`-valuation of `x`, its principal symbol, and the
    /// certificate. `extra_tail` bounds any truncation the caller made
    /// before handing `x` over. Refuses to return uncertified symbols.
    pub fn r_valuation_symbol(&self, x: &IwasawaSeries, radius: u32, extra_tail: Option<Q>) -> Result<(Q, Poly, SymbolCertificate)> {
        let cr = &self.coeff;
        let e = cr.e() as i64;
        let (tail_box, tail_cut) = self.tail_bounds(radius);
        let precision_bound = q(cr.prec() as i64, 1) - q(x.den as i64, e);
        let bound = self.certified_bound(x, radius, extra_tail);
        let pn = q((self.group.p() as i64).pow(radius), 1);
        let omegas = self.omegas();
        let prune = bound - x.floor.min(bound);
        let mons = self.monomials(x, radius, Some(prune.max(q(0, 1))))?;
        let mut best: Option<Q> = None;
        let mut data = Vec::new();
        for (alpha, c) in &mons {
            let Some((t, lc)) = cr.leading(c) else { continue };
            let tau = alpha.iter().zip(&omegas).fold(q(0, 1), |acc, (&a, &w)| acc + w * q(a as i64, 1)) / pn;
            let v = q(t as i64 - x.den as i64, e) + tau;
            best = Some(best.map_or(v, |b: Q| b.min(v)));
            data.push((alpha.clone(), t as i64 - x.den as i64, lc, v));
        }
        let Some(valuation) = best else {
            return Err(Error::Uncertified(format!("series vanishes below the certified bound {bound}")));
        };
        let valid = valuation < bound;
        let ring = self.symbol_ring(radius);
        let mut attaining = Vec::new();
        let mut sym = Poly::zero(&ring);
        for (alpha, eps, lc, v) in data {
            if v != valuation {
                continue;
            }
            if eps < 0 {
                return Err(Error::Unsupported(format!("symbol carries eps^{eps}")));
            }
            let mut m = alpha.clone();
            m.push(eps as u32);
            sym.add_term(Mono(m), lc);
            attaining.push(alpha);
        }
        let cert = SymbolCertificate {
            radius,
            valuation,
            tail_box,
            tail_cut,
            floor: x.floor,
            precision_bound,
            extra_tail,
            bound,
            attaining,
            valid,
        };
        if !valid {
            return Err(Error::Uncertified(format!(
                "valuation {valuation} not below the certified bound {bound}; raise the level or precision"
            )));
        }
        Ok((valuation, sym, cert))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PpowerReport {
    pub index: usize,
    pub label: String,
    pub n: u32,
    pub n_extra: u32,
    /// `[h^{p^N}] - 1 ≡ b^{p^N}` modulo `(p^k b^{p^{N-k}})_{k=1..N}`.
    pub congruence: bool,
    /// Symbols of `b^{p^N}` and `[h^{p^N}] - 1` agree at radius `N + N'`.
    pub symbol_match: bool,
    /// The same for the sum over all basis elements of this degree.
    pub combination_match: bool,
    pub symbol: String,
    pub passed: bool,
}

fn ideal_member(alpha: &[u32], i: usize, coeff_val: Option<u32>, e: u32, p: u64, n: u32) -> bool {
    if alpha.iter().enumerate().any(|(j, &a)| j != i && a > 0) {
        return false;
    }
    let deg = alpha[i] as u64;
    let Some(v) = coeff_val else { return true };
    (1..=n).any(|k| deg >= p.pow(n - k) && v >= k * e)
}

/// Check the `p`-power congruence and symbol compatibility for basis
/// element `index`.
pub fn verify_ppower_identity(actx: &AlgebraContext, index: usize, n: u32, n_extra: u32) -> Result<PpowerReport> {
    let p = actx.group.p() as u64;
    let cr = &actx.coeff;
    let label = actx.group.basis()[index].label();
    if n == 0 {
        return Ok(PpowerReport {
            index,
            label,
            n,
            n_extra,
            congruence: true,
            symbol_match: true,
            combination_match: true,
            symbol: String::new(),
            passed: true,
        });
    }
    if actx.caps[index] <= n {
        return Err(Error::Config(format!("cap {} too small to see degree p^{n}", actx.caps[index])));
    }
    let dirac_minus_one = actx.sub(&actx.basis_ppower_dirac(index, n), &actx.one());
    let b = actx.basis_b(index);
    let bpow = actx.pow(&b, p.pow(n) as u32);
    let diff = actx.sub(&dirac_minus_one, &bpow);
    let congruence = actx
        .monomials(&diff, 0, None)?
        .iter()
        .all(|(alpha, c)| ideal_member(alpha, index, cr.valuation(c), cr.e() as u32, p, n));

    let radius = n + n_extra;
    let (v1, s1, _) = actx.r_valuation_symbol(&bpow, radius, None)?;
    let (v2, s2, _) = actx.r_valuation_symbol(&dirac_minus_one, radius, None)?;
    let symbol_match = v1 == v2 && s1 == s2;

    let w = actx.omegas()[index];
    let same: Vec<usize> = (0..actx.dim()).filter(|&j| actx.omegas()[j] == w && actx.caps[j] > n).collect();
    let mut lhs = actx.zero();
    let mut rhs = actx.zero();
    for (t, &j) in same.iter().enumerate() {
        let unit = (t as i64 % (p as i64 - 1)) + 1;
        let bj = actx.pow(&actx.basis_b(j), p.pow(n) as u32);
        lhs = actx.add(&lhs, &actx.scale_int(&bj, unit));
        let dj = actx.sub(&actx.basis_ppower_dirac(j, n), &actx.one());
        rhs = actx.add(&rhs, &actx.scale_int(&dj, unit));
    }
    let (u1, t1, _) = actx.r_valuation_symbol(&lhs, radius, None)?;
    let (u2, t2, _) = actx.r_valuation_symbol(&rhs, radius, None)?;
    let combination_match = u1 == u2 && t1 == t2;
    Ok(PpowerReport {
        index,
        label,
        n,
        n_extra,
        congruence,
        symbol_match,
        combination_match,
        symbol: s1.to_string(),
        passed: congruence && symbol_match && combination_match,
    })
}
