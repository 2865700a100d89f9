//! Truncated Iwasawa algebras `O_L[H/H_ν] / p^M` with the `r_N`-norms.
//!
//! A series is stored in the group basis: a sparse map from cosets of
//! `H_ν = {ω ≥ ν}` (keyed by a reduced matrix representative) to
//! coefficients in `O_L / p^M`, together with a global denominator
//! `ϖ^den`. The monomial basis `b^α = Π (h_i - 1)^{α_i}` is reached through
//! coordinates of the second kind and binomial coefficients.

mod monomials;
mod symbol;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

pub use monomials::{binom_mod, MonomialMap};
pub use symbol::{tail_bounds, verify_ppower_identity, PpowerReport, SymbolCertificate};

use crate::error::{Error, Result};
use crate::int_ring::{IntRing, RElem};
use crate::padic_tower::FieldTower;
use crate::pvalued_groups::{build_group_context_with_precision, GroupContext, GroupElement, Mat2};
use crate::rational::{ceil, q, Q};

/// Default guard on `log2` of the quotient size `p^{Σ n_i}`; the quotient is
/// never enumerated, so this only rejects absurd levels.
pub const DEFAULT_QUOTIENT_BUDGET_LOG2: f64 = 256.0;

type Key = Vec<u64>;

#[derive(Debug)]
pub struct AlgebraContext {
    group: GroupContext,
    coeff: IntRing,
    level: Q,
    level2: i64,
    caps: Vec<u32>,
    entry_bounds: [u32; 4],
    coords: Mutex<HashMap<Key, Arc<Vec<u64>>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub field: String,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub level: Q,
    pub precision: u32,
    pub caps: Vec<u32>,
    pub quotient_size_log_p: u32,
}

/// Build the quotient algebra at level `ν` and coefficient precision `M`.
pub fn build_algebra(ctx: &GroupContext, level: Q, precision: u32) -> Result<AlgebraContext> {
    build_algebra_with_budget(ctx, level, precision, DEFAULT_QUOTIENT_BUDGET_LOG2)
}

pub fn build_algebra_with_budget(ctx: &GroupContext, level: Q, precision: u32, budget_log2: f64) -> Result<AlgebraContext> {
    if precision < 2 {
        return Err(Error::Config("coefficient precision must be at least 2".into()));
    }
    let omegas = ctx.omegas();
    let mut caps = Vec::with_capacity(omegas.len());
    for (b, w) in ctx.basis().iter().zip(&omegas) {
        let c = ceil(level - *w);
        if c <= 0 {
            return Err(Error::Config(format!("level {level} gives cap 0 for {}", b.label())));
        }
        caps.push(c as u32);
    }
    let total: u32 = caps.iter().sum();
    if total as f64 * (ctx.p() as f64).log2() > budget_log2 {
        return Err(Error::Budget(format!("quotient size {}^{total} exceeds the budget", ctx.p())));
    }
    let e = ctx.tower().e() as i64;
    let level2 = ceil(q(2 * e, 1) * (level + ctx.shift_constant() + q(1, 1)));
    let la = (level2 + 1).div_euclid(2) as u32;
    let lb = level2.div_euclid(2) as u32;
    let lc = (level2 + 2).div_euclid(2) as u32;
    let need_digits = lc.max(la) + 1;
    let qprec = need_digits.div_ceil(e as u32) + 1;
    let group = build_group_context_with_precision(ctx.case(), ctx.tower(), qprec)?;
    let coeff = IntRing::new(group.group_tower(), precision)?;
    Ok(AlgebraContext {
        group,
        coeff,
        level,
        level2,
        caps,
        entry_bounds: [la, lb, lc, la],
        coords: Mutex::new(HashMap::new()),
    })
}

/// Floor of the zero series; small enough that bound arithmetic stays in range.
const VACUOUS_FLOOR: i64 = 1 << 24;

/// An element `Σ_g c_g [g] / ϖ^den` of the truncated algebra.
#[derive(Clone, Debug)]
pub struct IwasawaSeries {
    terms: HashMap<Key, RElem>,
    den: u32,
    /// Lower bound on the `p`-adic valuation of the coefficients of an
    /// exact (untruncated) group-ring expression of this element.
    floor: Q,
}

impl IwasawaSeries {
    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn floor(&self) -> Q {
        self.floor
    }

    /// Number of group elements in the support.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }
}

impl AlgebraContext {
    pub fn group(&self) -> &GroupContext {
        &self.group
    }

    pub fn coeff_ring(&self) -> &IntRing {
        &self.coeff
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.group.tower()
    }

    pub fn level(&self) -> Q {
        self.level
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn precision(&self) -> u32 {
        self.coeff.prec()
    }

    pub fn dim(&self) -> usize {
        self.caps.len()
    }

    pub fn omegas(&self) -> Vec<Q> {
        self.group.omegas()
    }

    /// `log_p` of the quotient size.
    pub fn quotient_size_log_p(&self) -> u32 {
        self.caps.iter().sum()
    }

    pub fn summary(&self) -> AlgebraSummary {
        AlgebraSummary {
            field: self.tower().label(),
            level: self.level,
            precision: self.precision(),
            caps: self.caps.clone(),
            quotient_size_log_p: self.quotient_size_log_p(),
        }
    }

    fn key_of(&self, m: &Mat2) -> Key {
        let r = self.group.ring();
        let mut k = Vec::with_capacity(4 * r.dim());
        for (x, &b) in m.0.iter().zip(&self.entry_bounds) {
            k.extend(r.truncate_varpi(x, b));
        }
        k
    }

    fn mat_of(&self, k: &Key) -> Mat2 {
        let n = self.group.ring().dim();
        Mat2(std::array::from_fn(|i| k[i * n..(i + 1) * n].to_vec()))
    }

    fn identity_key(&self) -> Key {
        self.key_of(&Mat2::identity(self.group.ring()))
    }

    /// Coordinates (reduced below the caps) of a coset.
    pub(crate) fn coords_of(&self, k: &Key) -> Result<Arc<Vec<u64>>> {
        if let Some(c) = self.coords.lock().unwrap().get(k) {
            return Ok(c.clone());
        }
        let g = self.group.element(self.mat_of(k));
        let c = self.group.coordinates_below(&g, self.level2)?;
        let p = self.group.p() as u64;
        let v: Vec<u64> = c.values.iter().zip(&self.caps).map(|(&a, &n)| a % p.pow(n)).collect();
        let v = Arc::new(v);
        self.coords.lock().unwrap().insert(k.clone(), v.clone());
        Ok(v)
    }

    pub fn zero(&self) -> IwasawaSeries {
        IwasawaSeries { terms: HashMap::new(), den: 0, floor: q(VACUOUS_FLOOR, 1) }
    }

    pub fn one(&self) -> IwasawaSeries {
        self.from_key(self.identity_key())
    }

    fn from_key(&self, k: Key) -> IwasawaSeries {
        let mut terms = HashMap::new();
        terms.insert(k, self.coeff.one());
        IwasawaSeries { terms, den: 0, floor: q(0, 1) }
    }

    /// The Dirac element `[g]`. `g` may come from any context over the same
    /// field whose precision is at least the quotient's.
    pub fn dirac(&self, g: &GroupElement) -> Result<IwasawaSeries> {
        let r = self.group.ring();
        let src = &g.m;
        if src.0[0].len() != r.dim() {
            return Err(Error::Config("group element over a different field".into()));
        }
        let m = Mat2(std::array::from_fn(|i| r.reduce_from(&src.0[i])));
        Ok(self.from_key(self.key_of(&m)))
    }

    /// `[h_1^{a_1} ⋯ h_d^{a_d}]`.
    pub fn dirac_coords(&self, a: &[u64]) -> IwasawaSeries {
        self.from_key(self.key_of(&self.group.from_coordinates(a).m))
    }

    /// `b_i = [h_i] - 1`.
    pub fn basis_b(&self, i: usize) -> IwasawaSeries {
        let mut a = vec![0u64; self.dim()];
        a[i] = 1;
        self.sub(&self.dirac_coords(&a), &self.one())
    }

    /// `[h_i^{p^m}]` for the quotient's own basis.
    pub fn basis_ppower_dirac(&self, i: usize, m: u32) -> IwasawaSeries {
        let mut a = vec![0u64; self.dim()];
        a[i] = (self.group.p() as u64).pow(m);
        self.dirac_coords(&a)
    }

    fn rescale(&self, x: &IwasawaSeries, den: u32) -> HashMap<Key, RElem> {
        debug_assert!(den >= x.den);
        let shift = den - x.den;
        if shift == 0 {
            return x.terms.clone();
        }
        let s = self.coeff.pow(&self.coeff.varpi(), shift as u64);
        x.terms.iter().map(|(k, c)| (k.clone(), self.coeff.mul(c, &s))).collect()
    }

    fn clean(&self, terms: HashMap<Key, RElem>, den: u32, floor: Q) -> IwasawaSeries {
        let terms: HashMap<Key, RElem> = terms.into_iter().filter(|(_, c)| !self.coeff.is_zero(c)).collect();
        let floor = if terms.is_empty() { q(VACUOUS_FLOOR, 1) } else { floor };
        IwasawaSeries { terms, den, floor }
    }

    pub fn add(&self, x: &IwasawaSeries, y: &IwasawaSeries) -> IwasawaSeries {
        let den = x.den.max(y.den);
        let mut t = self.rescale(x, den);
        for (k, c) in self.rescale(y, den) {
            let e = t.entry(k).or_insert_with(|| self.coeff.zero());
            self.coeff.add_assign(e, &c);
        }
        self.clean(t, den, x.floor.min(y.floor))
    }

    pub fn neg(&self, x: &IwasawaSeries) -> IwasawaSeries {
        let terms = x.terms.iter().map(|(k, c)| (k.clone(), self.coeff.neg(c))).collect();
        IwasawaSeries { terms, den: x.den, floor: x.floor }
    }

    pub fn sub(&self, x: &IwasawaSeries, y: &IwasawaSeries) -> IwasawaSeries {
        self.add(x, &self.neg(y))
    }

    pub fn scale_int(&self, x: &IwasawaSeries, n: i64) -> IwasawaSeries {
        let terms = x.terms.iter().map(|(k, c)| (k.clone(), self.coeff.scale(c, n))).collect();
        let v = if n == 0 { 0 } else { crate::rational::vp_u64(n.unsigned_abs(), self.group.p() as u64) };
        self.clean(terms, x.den, x.floor + q(v as i64, 1))
    }

    /// Multiply by `c / ϖ^{extra_den}` with `c` integral.
    pub fn scale(&self, x: &IwasawaSeries, c: &[u64], extra_den: u32) -> IwasawaSeries {
        let terms = x.terms.iter().map(|(k, a)| (k.clone(), self.coeff.mul(a, c))).collect();
        let e = self.coeff.e() as i64;
        let vc = self.coeff.valuation(c).map_or(q(0, 1), |v| q(v as i64, e));
        self.clean(terms, x.den + extra_den, x.floor + vc - q(extra_den as i64, e))
    }

    /// Divide by a nonzero integer.
    pub fn div_int(&self, x: &IwasawaSeries, n: i64) -> IwasawaSeries {
        let (c, d) = self.coeff.scaled_reciprocal(n);
        let terms = x.terms.iter().map(|(k, a)| (k.clone(), self.coeff.mul(a, &c))).collect();
        let v = crate::rational::vp_u64(n.unsigned_abs(), self.group.p() as u64);
        self.clean(terms, x.den + d, x.floor - q(v as i64, 1))
    }

    pub fn mul(&self, x: &IwasawaSeries, y: &IwasawaSeries) -> IwasawaSeries {
        let r = self.group.ring();
        let ymats: Vec<(Mat2, &RElem)> = y.terms.iter().map(|(k, c)| (self.mat_of(k), c)).collect();
        let mut acc: HashMap<Key, RElem> = HashMap::new();
        for (kx, cx) in &x.terms {
            let mx = self.mat_of(kx);
            for (my, cy) in &ymats {
                let key = self.key_of(&mx.mul(r, my));
                let e = acc.entry(key).or_insert_with(|| self.coeff.zero());
                self.coeff.add_assign(e, &self.coeff.mul(cx, cy));
            }
        }
        self.clean(acc, x.den + y.den, x.floor + y.floor)
    }

    pub fn pow(&self, x: &IwasawaSeries, n: u32) -> IwasawaSeries {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// True when `x - y` vanishes at the working precision.
    pub fn series_eq(&self, x: &IwasawaSeries, y: &IwasawaSeries) -> bool {
        self.sub(x, y).terms.is_empty()
    }

    /// Truncated `ψ(log g) = -Σ_{i=1}^{terms} (1 - [g])^i / i`, computed
    /// inside the cyclic subgroup generated by `g`.
    pub fn log_dirac(&self, g: &GroupElement, terms: usize) -> Result<IwasawaSeries> {
        let r = self.group.ring();
        let gk = self.dirac(g)?;
        let gkey = gk.terms.keys().next().unwrap().clone();
        let gm = self.mat_of(&gkey);
        let id = self.identity_key();
        // Powers g^0, g^1, … until the cycle closes or `terms` is reached.
        let mut keys = vec![id.clone()];
        let mut cur = Mat2::identity(r);
        while keys.len() <= terms {
            cur = cur.mul(r, &gm);
            let k = self.key_of(&cur);
            if k == id {
                break;
            }
            keys.push(k);
        }
        let order = keys.len();
        let cr = &self.coeff;
        let p = self.group.p() as u64;
        let e = cr.e() as u32;
        let maxv = (1..=terms as u64).map(|i| crate::rational::vp_u64(i, p)).max().unwrap_or(0);
        let den = e * maxv;
        // poly = (1 - x)^i in the cyclic algebra Z/p^M[x]/(x^order - 1).
        let mut poly = vec![cr.zero(); order];
        poly[0] = cr.one();
        let mut acc = vec![cr.zero(); order];
        for i in 1..=terms {
            let mut next = poly.clone();
            for k in 0..order {
                let from = (k + order - 1) % order;
                cr.add_assign(&mut next[k], &cr.neg(&poly[from]));
            }
            poly = next;
            let (c, d) = cr.scaled_reciprocal(-(i as i64));
            let c = cr.mul_varpi_pow(&c, den - d);
            for k in 0..order {
                cr.add_assign(&mut acc[k], &cr.mul(&poly[k], &c));
            }
        }
        let map: HashMap<Key, RElem> = keys.into_iter().zip(acc).collect();
        Ok(self.clean(map, den, -q(maxv as i64, 1)))
    }

    /// The sum `Σ c_α b^α` with integral coefficients.
    pub fn from_monomials(&self, mons: &[(Vec<u32>, RElem)]) -> IwasawaSeries {
        let cr = &self.coeff;
        let p = self.group.p() as u64;
        let mut acc: HashMap<Vec<u64>, RElem> = HashMap::new();
        let mut floor = q(VACUOUS_FLOOR, 1);
        let e = cr.e() as i64;
        for (alpha, c) in mons {
            if let Some(v) = cr.valuation(c) {
                floor = floor.min(q(v as i64, e));
            }
            // b^α = Σ_{k ≤ α} Π (-1)^{α_i - k_i} C(α_i, k_i) [h^k]
            let mut partial: Vec<(Vec<u64>, RElem)> = vec![(Vec::new(), c.clone())];
            for &a in alpha {
                let mut next = Vec::new();
                for (ks, coef) in &partial {
                    for k in 0..=a {
                        let b = binom_mod(a as u64, k as u64, p, cr.prec()) as i64;
                        let sign = if (a - k) % 2 == 0 { 1 } else { -1 };
                        let mut ks2 = ks.clone();
                        ks2.push(k as u64);
                        next.push((ks2, cr.scale(coef, sign * b)));
                    }
                }
                partial = next;
            }
            for (ks, coef) in partial {
                let e = acc.entry(ks).or_insert_with(|| cr.zero());
                cr.add_assign(e, &coef);
            }
        }
        let mut terms: HashMap<Key, RElem> = HashMap::new();
        for (ks, coef) in acc {
            let key = self.key_of(&self.group.from_coordinates(&ks).m);
            let e = terms.entry(key).or_insert_with(|| cr.zero());
            cr.add_assign(e, &coef);
        }
        self.clean(terms, 0, floor)
    }
}

/// `min_{i > terms} (i·ω/p^N - v_p(i))`: a lower bound for the
/// `r_N`-valuation of the tail of the logarithm of `[g]`, `ω = ω(g)`.
pub fn log_tail_bound(omega: Q, terms: usize, p: u32, radius: u32) -> Q {
    let slope = omega / q((p as i64).pow(radius), 1);
    let slope_f = *slope.numer() as f64 / *slope.denom() as f64;
    let ln_p = (p as f64).ln();
    let mut best: Option<Q> = None;
    let mut i = terms as u64 + 1;
    loop {
        let v = slope * q(i as i64, 1) - q(crate::rational::vp_u64(i, p as u64) as i64, 1);
        let b = *best.get_or_insert(v);
        let b = if v < b { v } else { b };
        best = Some(b);
        // i·s - log_p(i) bounds every later term from below and increases
        // once i > 1/(s ln p).
        let smooth = slope_f * i as f64 - (i as f64).ln() / ln_p;
        if i as f64 * slope_f * ln_p > 1.0 && smooth > *b.numer() as f64 / *b.denom() as f64 + 1e-9 {
            return b;
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests;
