use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::unramified::unr_mul;
use super::{FieldTower, EXACT};
use crate::error::{Error, Result};
use crate::rational::{q, ExtQ};

/// An element `X · ϖ^{-shift}` of `K`, where the integral part
/// `X = Σ c_{ij} α^i ϖ^j` is known modulo `ϖ^prec`.
///
/// Coordinates are kept reduced: `c_{ij}` lies in `[0, p^{⌈(prec-j)/e⌉})`.
/// Exactly known elements carry `prec = EXACT` and are never reduced.
#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<FieldTower>,
    coeffs: Vec<BigInt>,
    shift: i64,
    prec: i64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = if self.prec >= EXACT { "exact".to_string() } else { self.prec.to_string() };
        write!(f, "FieldElement({:?} * varpi^-{}, prec {})", self.coeffs, self.shift, prec)
    }
}

fn pow_p(p: u32, k: i64) -> BigInt {
    BigInt::from(p).pow(k.max(0) as u32)
}

impl FieldElement {
    pub(crate) fn from_raw(tower: &Arc<FieldTower>, coeffs: Vec<BigInt>, shift: i64, prec: i64) -> Self {
        let mut x = FieldElement { tower: tower.clone(), coeffs, shift, prec };
        x.normalize();
        x
    }

    pub fn zero(tower: &Arc<FieldTower>) -> Self {
        Self::from_raw(tower, vec![BigInt::zero(); tower.f * tower.e], 0, EXACT)
    }

    pub fn one(tower: &Arc<FieldTower>) -> Self {
        Self::from_int(tower, 1)
    }

    pub fn from_int(tower: &Arc<FieldTower>, n: i64) -> Self {
        Self::from_bigint(tower, BigInt::from(n))
    }

    pub fn from_bigint(tower: &Arc<FieldTower>, n: BigInt) -> Self {
        let mut c = vec![BigInt::zero(); tower.f * tower.e];
        c[0] = n;
        Self::from_raw(tower, c, 0, EXACT)
    }

    /// The rational number `n / d` (with `d ≠ 0`) at the default precision.
    pub fn from_ratio(tower: &Arc<FieldTower>, n: i64, d: i64) -> Result<Self> {
        let num = Self::from_int(tower, n);
        let den = Self::from_int(tower, d);
        num.div(&den)
    }

    /// An element of the unramified subring from its `α`-coordinates.
    pub fn from_unramified(tower: &Arc<FieldTower>, alpha_coords: &[i64]) -> Self {
        let mut c = vec![BigInt::zero(); tower.f * tower.e];
        for (i, &x) in alpha_coords.iter().enumerate().take(tower.f) {
            c[i] = BigInt::from(x);
        }
        Self::from_raw(tower, c, 0, EXACT)
    }

    /// An exact integral element from its coordinates `c[j*f + i]` on `α^i ϖ^j`.
    pub fn from_coords(tower: &Arc<FieldTower>, coords: &[BigInt]) -> Self {
        let mut c = coords.to_vec();
        c.resize(tower.f * tower.e, BigInt::zero());
        Self::from_raw(tower, c, 0, EXACT)
    }

    /// `α` (the generator of the unramified part).
    pub fn alpha(tower: &Arc<FieldTower>) -> Self {
        if tower.f == 1 {
            return Self::from_bigint(tower, -tower.u_poly[0].clone());
        }
        let mut c = vec![BigInt::zero(); tower.f * tower.e];
        c[1] = BigInt::one();
        Self::from_raw(tower, c, 0, EXACT)
    }

    /// The uniformizer `ϖ`.
    pub fn varpi(tower: &Arc<FieldTower>) -> Self {
        if tower.e == 1 {
            // ϖ = -a_0 when e = 1.
            let c: Vec<BigInt> = tower.e_poly[0].iter().map(|x| -x).collect();
            return Self::from_raw(tower, c, 0, EXACT);
        }
        let mut c = vec![BigInt::zero(); tower.f * tower.e];
        c[tower.f] = BigInt::one();
        Self::from_raw(tower, c, 0, EXACT)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Integral coordinates `c[j*f + i]`.
    pub fn coords(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Absolute precision of the value, in `ϖ`-digits (`None` when exact).
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.prec >= EXACT {
            None
        } else {
            Some(self.prec - self.shift)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Reduce to absolute precision `abs` (in `ϖ`-digits) if that is lower.
    pub fn with_precision(&self, abs: i64) -> Self {
        let target = abs + self.shift;
        if target >= self.prec {
            return self.clone();
        }
        Self::from_raw(&self.tower, self.coeffs.clone(), self.shift, target)
    }

    fn normalize(&mut self) {
        if self.shift < 0 {
            let k = -self.shift;
            self.coeffs = mul_varpi_power(&self.tower, &self.coeffs, k);
            if self.prec < EXACT {
                self.prec += k;
            }
            self.shift = 0;
        }
        if self.prec >= EXACT {
            return;
        }
        let t = &self.tower;
        let e = t.e as i64;
        for j in 0..t.e {
            let k = Integer::div_ceil(&(self.prec - j as i64), &e);
            let m = pow_p(t.p, k);
            for i in 0..t.f {
                let c = &mut self.coeffs[j * t.f + i];
                *c = if k <= 0 { BigInt::zero() } else { c.mod_floor(&m) };
            }
        }
    }

    /// `ϖ`-adic valuation of the integral part (`None` when it vanishes at
    /// the stored precision).
    fn integral_valuation(&self) -> Option<i64> {
        let t = &self.tower;
        let pb = BigInt::from(t.p);
        let mut best: Option<i64> = None;
        for j in 0..t.e {
            for i in 0..t.f {
                let c = &self.coeffs[j * t.f + i];
                if c.is_zero() {
                    continue;
                }
                let mut v = 0i64;
                let mut x = c.clone();
                while (&x % &pb).is_zero() {
                    x /= &pb;
                    v += 1;
                }
                let d = v * t.e as i64 + j as i64;
                best = Some(best.map_or(d, |b: i64| b.min(d)));
            }
        }
        match best {
            Some(d) if d < self.prec => Some(d),
            _ => None,
        }
    }

    /// `v_p(x)`, normalized so that `v_p(p) = 1`.
    pub fn valuation(&self) -> Result<ExtQ> {
        match self.integral_valuation() {
            Some(d) => Ok(ExtQ::Finite(q(d - self.shift, self.tower.e as i64))),
            None if self.prec >= EXACT => Ok(ExtQ::Infinite),
            None => Err(Error::Indeterminate(format!(
                "all digits vanish below absolute precision {}",
                self.prec - self.shift
            ))),
        }
    }

    /// Valuation in `ϖ`-digits of a nonzero element.
    pub fn varpi_valuation(&self) -> Result<i64> {
        match self.integral_valuation() {
            Some(d) => Ok(d - self.shift),
            None => Err(Error::Indeterminate("element vanishes at working precision".into())),
        }
    }

    /// True when the element is zero to its stored precision.
    pub fn is_zero(&self) -> bool {
        self.integral_valuation().is_none()
    }

    fn raw_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        raw_mul(&self.tower, a, b)
    }

    fn aligned(&self, other: &Self) -> (Vec<BigInt>, Vec<BigInt>, i64, i64) {
        let s = self.shift.max(other.shift);
        let lift = |x: &Self| -> (Vec<BigInt>, i64) {
            let k = s - x.shift;
            let c = if k == 0 { x.coeffs.clone() } else { mul_varpi_power(&x.tower, &x.coeffs, k) };
            let prec = if x.prec >= EXACT { EXACT } else { x.prec + k };
            (c, prec)
        };
        let (a, pa) = lift(self);
        let (b, pb) = lift(other);
        (a, b, s, pa.min(pb))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, s, prec) = self.aligned(other);
        let c = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Self::from_raw(&self.tower, c, s, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, s, prec) = self.aligned(other);
        let c = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        Self::from_raw(&self.tower, c, s, prec)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| -x).collect();
        Self::from_raw(&self.tower, c, self.shift, self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = self.raw_mul(&self.coeffs, &other.coeffs);
        let prec = if self.prec >= EXACT && other.prec >= EXACT {
            EXACT
        } else {
            let va = self.integral_valuation().unwrap_or(self.prec);
            let vb = other.integral_valuation().unwrap_or(other.prec);
            let pa = if self.prec >= EXACT { EXACT } else { self.prec + vb };
            let pb = if other.prec >= EXACT { EXACT } else { other.prec + va };
            pa.min(pb)
        };
        Self::from_raw(&self.tower, c, self.shift + other.shift, prec)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(&self.tower, n))
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(&self.tower);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Multiply by `ϖ^k` for any integer `k` (exactly, via the shift).
    pub fn mul_varpi_pow(&self, k: i64) -> Self {
        Self::from_raw(&self.tower, self.coeffs.clone(), self.shift - k, self.prec)
    }

    /// Divide an integral part of positive valuation by `ϖ`.
    fn div_varpi_integral(&self, coeffs: &[BigInt], prec: i64) -> (Vec<BigInt>, i64) {
        let t = &self.tower;
        let cap = t.max_prec();
        let prec = prec.min(cap);
        let prod = self.raw_mul(coeffs, t.varpi_inverse_times_p());
        let pb = BigInt::from(t.p);
        let out = prod.into_iter().map(|x| x.div_floor(&pb)).collect();
        (out, prec - 1)
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Self> {
        let t = self.tower.clone();
        let v = self
            .integral_valuation()
            .ok_or_else(|| Error::Indeterminate("cannot invert an element that vanishes at working precision".into()))?;
        // Relative precision of the result.
        let cap = t.max_prec();
        let mut prec = self.prec.min(cap + v);
        let mut unit = self.coeffs.clone();
        for _ in 0..v {
            let (u, p2) = self.div_varpi_integral(&unit, prec);
            unit = u;
            prec = p2;
        }
        let rel = (prec).min(cap).max(1);
        let unit_el = Self::from_raw(&t, unit, 0, rel);
        // Newton from the residue inverse.
        let field = t.residue_field();
        let r: Vec<i64> = (0..t.f)
            .map(|i| {
                let c = unit_el.coeffs[i].mod_floor(&BigInt::from(t.p));
                i64::try_from(c).unwrap()
            })
            .collect();
        let inv_res = field.inv(field.from_coeffs(&r)).ok_or_else(|| Error::SelfCheck("unit has zero residue".into()))?;
        let y0: Vec<i64> = field.to_coeffs(inv_res).into_iter().map(|x| x as i64).collect();
        let mut y = Self::from_unramified(&t, &y0).with_precision(rel);
        let two = Self::from_int(&t, 2);
        let mut correct = 1i64;
        while correct < rel {
            y = y.mul(&two.sub(&unit_el.mul(&y))).with_precision(rel);
            correct *= 2;
        }
        let y = Self::from_raw(&t, y.coeffs, 0, rel);
        // x = unit · ϖ^{v - shift}
        Ok(y.mul_varpi_pow(self.shift - v))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Coordinates of an integral element with its denominator cleared.
    pub fn integral_coords(&self) -> Result<Vec<BigInt>> {
        if self.shift == 0 {
            return Ok(self.coeffs.clone());
        }
        let v = self.integral_valuation().unwrap_or(self.prec);
        if v < self.shift {
            return Err(Error::Config("element is not integral".into()));
        }
        let mut c = self.coeffs.clone();
        let mut prec = self.prec;
        for _ in 0..self.shift {
            let (u, p2) = self.div_varpi_integral(&c, prec);
            c = u;
            prec = p2;
        }
        Ok(Self::from_raw(&self.tower, c, 0, prec).coeffs)
    }

    /// Equality to the lower of the two precisions.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Class modulo `ϖ` of an integral element, in the residue field.
    pub fn residue(&self) -> Result<u32> {
        let v = self.valuation()?;
        if let ExtQ::Finite(x) = v {
            if x < q(0, 1) {
                return Err(Error::Config("residue of a non-integral element".into()));
            }
        }
        let t = &self.tower;
        if v.finite().is_none_or(|x| x > q(0, 1)) {
            return Ok(0);
        }
        // Valuation zero: the residue is the image of the j = 0 coordinates
        // of the value, which needs the shift folded in.
        let coeffs = if self.shift == 0 {
            self.coeffs.clone()
        } else {
            let mut c = self.coeffs.clone();
            let mut prec = self.prec;
            for _ in 0..self.shift {
                let (u, p2) = self.div_varpi_integral(&c, prec);
                c = u;
                prec = p2;
            }
            c
        };
        let pb = BigInt::from(t.p);
        let r: Vec<i64> = (0..t.f).map(|i| i64::try_from(coeffs[i].mod_floor(&pb)).unwrap()).collect();
        Ok(t.residue_field().from_coeffs(&r))
    }

    /// Leading coefficient: the residue of `x / ϖ^{v}` for `v` the
    /// `ϖ`-valuation of `x`.
    pub fn leading_coefficient(&self) -> Result<u32> {
        let v = self.varpi_valuation()?;
        self.mul_varpi_pow(-v).residue()
    }

    /// Apply `Frob^k` to the `α`-coordinates, fixing powers of `ϖ`.
    pub fn frobenius_raw(&self, k: i64) -> Self {
        let t = &self.tower;
        let f = t.f as i64;
        let k = k.rem_euclid(f) as usize;
        if k == 0 || t.f == 1 {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        for _ in 0..k {
            let mut out = vec![BigInt::zero(); t.f * t.e];
            for j in 0..t.e {
                for i in 0..t.f {
                    let c = &coeffs[j * t.f + i];
                    if c.is_zero() {
                        continue;
                    }
                    for (l, a) in t.frob_alpha_powers()[i].iter().enumerate() {
                        out[j * t.f + l] += c * a;
                    }
                }
            }
            coeffs = out;
        }
        let cap = t.cap_digits() * t.e as i64;
        Self::from_raw(t, coeffs, self.shift, self.prec.min(cap))
    }

    /// Coordinates as digit strings (`p`-adic digits of each `c_{ij}`,
    /// least significant first), for reports.
    pub fn digit_string(&self) -> String {
        let t = &self.tower;
        let pb = BigInt::from(t.p);
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                let mut x = c.clone();
                if x.is_negative() {
                    return c.to_string();
                }
                let mut d = Vec::new();
                while !x.is_zero() {
                    d.push(x.mod_floor(&pb).to_string());
                    x = x.div_floor(&pb);
                }
                if d.is_empty() {
                    "0".into()
                } else {
                    d.join(".")
                }
            })
            .collect();
        format!("[{}]/varpi^{}", parts.join(", "), self.shift)
    }
}

/// Product of integral coordinate vectors in `O_K`, without reduction.
pub(crate) fn raw_mul(t: &FieldTower, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (f, e) = (t.f, t.e);
    let mut prod: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); f]; 2 * e - 1];
    for ja in 0..e {
        let xa = &a[ja * f..(ja + 1) * f];
        if xa.iter().all(|x| x.is_zero()) {
            continue;
        }
        for jb in 0..e {
            let xb = &b[jb * f..(jb + 1) * f];
            if xb.iter().all(|x| x.is_zero()) {
                continue;
            }
            let m = unr_mul(&t.u_poly, xa, xb);
            for (acc, v) in prod[ja + jb].iter_mut().zip(m) {
                *acc += v;
            }
        }
    }
    // ϖ^e = -Σ_{k<e} a_k ϖ^k
    for d in (e..2 * e - 1).rev() {
        let c = std::mem::take(&mut prod[d]);
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        for k in 0..e {
            let m = unr_mul(&t.u_poly, &t.e_poly[k], &c);
            for (acc, v) in prod[d - e + k].iter_mut().zip(m) {
                *acc -= v;
            }
        }
    }
    prod.truncate(e);
    prod.into_iter().flatten().collect()
}

pub(crate) fn mul_varpi_power(t: &FieldTower, a: &[BigInt], k: i64) -> Vec<BigInt> {
    let mut out = a.to_vec();
    let mut varpi = vec![BigInt::zero(); t.f * t.e];
    if t.e == 1 {
        for (i, x) in t.e_poly[0].iter().enumerate() {
            varpi[i] = -x;
        }
    } else {
        varpi[t.f] = BigInt::one();
    }
    for _ in 0..k {
        out = raw_mul(t, &out, &varpi);
    }
    out
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.eq_at_precision(other)
    }
}
