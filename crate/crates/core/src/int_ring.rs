//! Fixed-precision arithmetic in `O_K / p^P` on machine words.
//!
//! Elements are coordinate vectors `c[j*f + i]` on the basis `α^i ϖ^j`,
//! each coordinate reduced into `0..p^P`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::finite_field::FiniteField;
use crate::padic_tower::{FieldElement, FieldTower};

pub type RElem = Vec<u64>;

#[derive(Clone, Debug)]
pub struct IntRing {
    tower: Arc<FieldTower>,
    p: u64,
    prec: u32,
    modulus: u64,
    f: usize,
    e: usize,
    /// `u_0 … u_{f-1}` reduced.
    u: Vec<u64>,
    /// `a_0 … a_{e-1}` as reduced `α`-vectors.
    a: Vec<Vec<u64>>,
    /// `Q` with `x / ϖ = x·Q / p`.
    q_div: RElem,
    /// The unit `ϖ^e / p`.
    varpi_e_over_p: RElem,
    residue: FiniteField,
    lc_p: u32,
}

fn reduce_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

impl IntRing {
    /// The ring `O_K / p^prec`; requires `p^prec < 2^62`.
    pub fn new(tower: &Arc<FieldTower>, prec: u32) -> Result<Self> {
        let p = tower.p() as u64;
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < (1u64 << 62))
                .ok_or_else(|| Error::Precision(format!("p^{prec} does not fit a machine word")))?;
        }
        if prec == 0 {
            return Err(Error::Precision("ring precision must be positive".into()));
        }
        let (f, e) = (tower.f(), tower.e());
        let u = tower.u_poly()[..f].iter().map(|c| reduce_big(c, modulus)).collect();
        let a: Vec<Vec<u64>> =
            tower.e_poly()[..e].iter().map(|c| c.iter().map(|x| reduce_big(x, modulus)).collect()).collect();
        let q_div = tower.varpi_inverse_times_p().iter().map(|x| reduce_big(x, modulus)).collect();
        // ϖ^e / p = -(w + Σ_{k≥1} (a_k / p) ϖ^k) with a_0 = p·w.
        let pb = BigInt::from(p);
        let mut vep = vec![0u64; f * e];
        for (k, ak) in tower.e_poly()[..e].iter().enumerate() {
            for (i, x) in ak.iter().enumerate() {
                vep[k * f + i] = reduce_big(&-(x / &pb), modulus);
            }
        }
        Ok(IntRing {
            tower: tower.clone(),
            p,
            prec,
            modulus,
            f,
            e,
            u,
            a,
            q_div,
            varpi_e_over_p: vep,
            residue: tower.residue_field().clone(),
            lc_p: tower.residue_of_p_over_varpi_e(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Precision in `p`-adic digits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Precision in `ϖ`-digits.
    pub fn varpi_prec(&self) -> u32 {
        self.prec * self.e as u32
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn dim(&self) -> usize {
        self.f * self.e
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    /// The same ring at another precision.
    pub fn with_prec(&self, prec: u32) -> Result<Self> {
        Self::new(&self.tower, prec)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    fn submod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn zero(&self) -> RElem {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> RElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RElem {
        let mut v = self.zero();
        v[0] = n.rem_euclid(self.modulus as i64) as u64;
        v
    }

    pub fn from_big_coords(&self, c: &[BigInt]) -> RElem {
        let mut v: RElem = c.iter().map(|x| reduce_big(x, self.modulus)).collect();
        v.resize(self.dim(), 0);
        v
    }

    /// Reduce an integral field element into the ring.
    pub fn from_field_element(&self, x: &FieldElement) -> Result<RElem> {
        Ok(self.from_big_coords(&x.integral_coords()?))
    }

    /// `α^i ϖ^j` for `i < f`, `j < e`.
    pub fn basis_element(&self, i: usize, j: usize) -> RElem {
        let mut v = self.zero();
        if self.f == 1 {
            // α is the rational root of u.
            v[j] = 1;
            let alpha = self.submod(0, self.u[0]);
            for _ in 0..i {
                v[j] = self.mulmod(v[j], alpha);
            }
        } else {
            v[j * self.f + i] = 1;
        }
        v
    }

    pub fn varpi(&self) -> RElem {
        if self.e == 1 {
            return self.a[0].iter().map(|&x| self.submod(0, x)).collect();
        }
        self.basis_element(0, 1)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> RElem {
        x.iter().zip(y).map(|(&a, &b)| self.addmod(a, b)).collect()
    }

    pub fn add_assign(&self, x: &mut [u64], y: &[u64]) {
        for (a, &b) in x.iter_mut().zip(y) {
            *a = self.addmod(*a, b);
        }
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> RElem {
        x.iter().zip(y).map(|(&a, &b)| self.submod(a, b)).collect()
    }

    pub fn neg(&self, x: &[u64]) -> RElem {
        x.iter().map(|&a| self.submod(0, a)).collect()
    }

    pub fn scale(&self, x: &[u64], n: i64) -> RElem {
        let c = n.rem_euclid(self.modulus as i64) as u64;
        x.iter().map(|&a| self.mulmod(a, c)).collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    fn unr_mul_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let f = self.f;
        if f == 1 {
            out[0] = self.addmod(out[0], self.mulmod(x[0], y[0]));
            return;
        }
        let mut prod = [0u128; 32];
        let m = self.modulus as u128;
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = (prod[k] % m) as u64;
            if c == 0 {
                continue;
            }
            for i in 0..f {
                let t = self.mulmod(c, self.u[i]) as u128;
                prod[k - f + i] = (prod[k - f + i] + m - t) % m;
            }
        }
        for i in 0..f {
            out[i] = self.addmod(out[i], prod[i] as u64);
        }
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> RElem {
        let (f, e) = (self.f, self.e);
        if e == 1 {
            let mut out = self.zero();
            self.unr_mul_into(x, y, &mut out);
            return out;
        }
        let mut prod = vec![0u64; (2 * e - 1) * f];
        for ja in 0..e {
            let xa = &x[ja * f..(ja + 1) * f];
            if xa.iter().all(|&c| c == 0) {
                continue;
            }
            for jb in 0..e {
                let yb = &y[jb * f..(jb + 1) * f];
                if yb.iter().all(|&c| c == 0) {
                    continue;
                }
                let d = ja + jb;
                self.unr_mul_into(xa, yb, &mut prod[d * f..(d + 1) * f]);
            }
        }
        let mut tmp = vec![0u64; f];
        for d in (e..2 * e - 1).rev() {
            let c: Vec<u64> = prod[d * f..(d + 1) * f].to_vec();
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            for k in 0..e {
                tmp.iter_mut().for_each(|v| *v = 0);
                self.unr_mul_into(&self.a[k], &c, &mut tmp);
                let base = (d - e + k) * f;
                for i in 0..f {
                    prod[base + i] = self.submod(prod[base + i], tmp[i]);
                }
            }
        }
        prod.truncate(e * f);
        prod
    }

    pub fn pow(&self, x: &[u64], n: u64) -> RElem {
        let mut acc = self.one();
        let mut base = x.to_vec();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn vp(&self, mut c: u64) -> u32 {
        let mut v = 0;
        while c.is_multiple_of(self.p) {
            c /= self.p;
            v += 1;
        }
        v
    }

    /// `ϖ`-adic valuation in digits (`None` when zero at this precision).
    pub fn valuation(&self, x: &[u64]) -> Option<u32> {
        let mut best: Option<u32> = None;
        for j in 0..self.e {
            for i in 0..self.f {
                let c = x[j * self.f + i];
                if c != 0 {
                    let d = self.vp(c) * self.e as u32 + j as u32;
                    best = Some(best.map_or(d, |b| b.min(d)));
                }
            }
        }
        best
    }

    /// Class of an integral element modulo `ϖ`.
    pub fn residue(&self, x: &[u64]) -> u32 {
        let c: Vec<i64> = x[..self.f].iter().map(|&v| (v % self.p) as i64).collect();
        self.residue.from_coeffs(&c)
    }

    /// Lift of a residue-field element along the `α`-basis.
    pub fn lift_residue(&self, r: u32) -> RElem {
        let mut v = self.zero();
        if self.f == 1 {
            v[0] = r as u64;
        } else {
            for (i, c) in self.residue.to_coeffs(r).into_iter().enumerate() {
                v[i] = c as u64;
            }
        }
        v
    }

    /// Leading coefficient: the residue of `x / ϖ^{v(x)}`, with its digit
    /// valuation.
    pub fn leading(&self, x: &[u64]) -> Option<(u32, u32)> {
        let v = self.valuation(x)?;
        let (k, j) = (v / self.e as u32, (v % self.e as u32) as usize);
        let pk = self.p.pow(k);
        let c: Vec<i64> = (0..self.f).map(|i| ((x[j * self.f + i] / pk) % self.p) as i64).collect();
        let unit = self.residue.from_coeffs(&c);
        // x ≈ unit · p^k · ϖ^j and p = lc_p · ϖ^e
        let lc = self.residue.mul(unit, self.residue.pow(self.lc_p, k as u64));
        Some((v, lc))
    }

    /// Divide by `p^k` when every coordinate is divisible by it.
    pub fn div_p_exact(&self, x: &[u64], k: u32) -> Option<RElem> {
        let pk = self.p.pow(k);
        if x.iter().all(|&c| c % pk == 0) {
            Some(x.iter().map(|&c| c / pk).collect())
        } else {
            None
        }
    }

    /// Divide by `ϖ` an element of positive valuation (the top digit of
    /// the result is lost).
    pub fn div_varpi(&self, x: &[u64]) -> Option<RElem> {
        if self.valuation(x) == Some(0) {
            return None;
        }
        self.div_p_exact(&self.mul(x, &self.q_div), 1)
    }

    pub fn mul_varpi_pow(&self, x: &[u64], k: u32) -> RElem {
        if k == 0 {
            return x.to_vec();
        }
        self.mul(x, &self.pow(&self.varpi(), k as u64))
    }

    /// The unit `ϖ^e / p`.
    pub fn varpi_e_over_p(&self) -> &[u64] {
        &self.varpi_e_over_p
    }

    /// Inverse of a unit.
    pub fn inverse(&self, x: &[u64]) -> Option<RElem> {
        let r = self.residue(x);
        let y0 = self.lift_residue(self.residue.inv(r)?);
        let mut y = y0;
        let two = self.from_int(2);
        let mut correct = 1u32;
        while correct < self.prec * self.e as u32 {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            correct *= 2;
        }
        Some(y)
    }

    /// `ϖ^{e·v} / n` as a ring element, where `v = v_p(n)`; the caller
    /// records the denominator `ϖ^{e·v}`.
    pub fn scaled_reciprocal(&self, n: i64) -> (RElem, u32) {
        let mut m = n.unsigned_abs();
        let mut v = 0u32;
        while m.is_multiple_of(self.p) {
            m /= self.p;
            v += 1;
        }
        let unit = self.from_int(if n < 0 { -(m as i64) } else { m as i64 });
        let inv = self.inverse(&unit).expect("unit");
        let scale = self.pow(&self.varpi_e_over_p, v as u64);
        (self.mul(&inv, &scale), v * self.e as u32)
    }

    /// Reduce modulo `ϖ^k`.
    pub fn truncate_varpi(&self, x: &[u64], k: u32) -> RElem {
        let mut out = x.to_vec();
        for j in 0..self.e {
            let keep = if k as usize > j { (k as usize - j).div_ceil(self.e) as u32 } else { 0 };
            let m = if keep >= self.prec { self.modulus } else { self.p.pow(keep) };
            for i in 0..self.f {
                out[j * self.f + i] %= m;
            }
        }
        out
    }

    /// Coordinates lifted to integers.
    pub fn to_big(&self, x: &[u64]) -> Vec<BigInt> {
        x.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Reduce from a ring of higher precision.
    pub fn reduce_from(&self, x: &[u64]) -> RElem {
        x.iter().map(|&c| c % self.modulus).collect()
    }

    /// Digits of each coordinate as a compact string.
    pub fn format(&self, x: &[u64]) -> String {
        let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        format!("[{}] mod {}^{}", parts.join(","), self.p, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_tower::build_tower;
    use proptest::prelude::*;

    fn sqrt3() -> Arc<FieldTower> {
        build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap()
    }

    fn q9_cube() -> Arc<FieldTower> {
        build_tower(3, &[1, 0, 1], &[vec![-3], vec![0], vec![0], vec![1]], None).unwrap()
    }

    #[test]
    fn varpi_arithmetic() {
        let t = sqrt3();
        let r = IntRing::new(&t, 10).unwrap();
        let w = r.varpi();
        assert_eq!(r.mul(&w, &w), r.from_int(3));
        assert_eq!(r.valuation(&w), Some(1));
        assert_eq!(r.div_varpi(&r.from_int(3)).unwrap()[..], w[..]);
        assert_eq!(r.leading(&r.from_int(6)), Some((2, 2)));
    }

    #[test]
    fn reciprocal() {
        let t = sqrt3();
        let r = IntRing::new(&t, 10).unwrap();
        let (c, den) = r.scaled_reciprocal(6);
        assert_eq!(den, 2);
        // c / ϖ^2 = 1/6  ⇔  6c = ϖ^2
        assert_eq!(r.scale(&c, 6), r.mul(&r.varpi(), &r.varpi()));
    }

    #[test]
    fn agrees_with_field_elements() {
        let t = q9_cube();
        let r = IntRing::new(&t, 12).unwrap();
        let x = FieldElement::alpha(&t).add(&FieldElement::varpi(&t).mul_int(5));
        let y = FieldElement::varpi(&t).pow(2).add(&FieldElement::from_int(&t, 7));
        let xy = r.from_field_element(&x.mul(&y)).unwrap();
        let prod = r.mul(&r.from_field_element(&x).unwrap(), &r.from_field_element(&y).unwrap());
        assert_eq!(xy, prod);
    }

    proptest! {
        #[test]
        fn unit_inverse(c in proptest::collection::vec(0u64..1000, 6)) {
            let t = q9_cube();
            let r = IntRing::new(&t, 15).unwrap();
            let mut x = r.reduce_from(&c);
            if r.residue(&x) == 0 { x[0] = r.addmod(x[0], 1); }
            if r.residue(&x) == 0 { x[1] = r.addmod(x[1], 1); }
            let y = r.inverse(&x).unwrap();
            prop_assert_eq!(r.mul(&x, &y), r.one());
        }
    }
}
