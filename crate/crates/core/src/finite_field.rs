//! Small prime-power fields `F_q` with log/antilog tables.
//!
//! Elements are encoded as `u32` values in `0..q`: the base-`p` digits of
//! the encoding are the coefficients (low to high) of a polynomial in the
//! generator `t` of `F_p[t]/(m(t))`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;

/// Reduce `a` modulo the odd prime `p` into `0..p`.
pub fn mod_p(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

#[derive(Clone, Serialize)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    q: u32,
    /// Monic modulus, low to high, length `degree + 1`.
    modulus: Vec<u32>,
    #[serde(skip)]
    exp: Vec<u32>,
    #[serde(skip)]
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.degree, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, &[0, 1])
    }

    /// `F_p[t]/(m)` for a monic `m` (low to high, reduced mod `p` here).
    pub fn new(p: u32, modulus: &[i64]) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        let m: Vec<u32> = modulus.iter().map(|&c| mod_p(c, p)).collect();
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::Config("field modulus must be monic of degree >= 1".into()));
        }
        let degree = (m.len() - 1) as u32;
        if !poly_irreducible_mod_p(&m, p) {
            return Err(Error::Config(format!("{m:?} is reducible modulo {p}")));
        }
        let q64 = (p as u64).pow(degree);
        if q64 > MAX_FIELD_SIZE as u64 {
            return Err(Error::Config(format!("field of size {q64} is too large")));
        }
        let q = q64 as u32;
        let mut field = FiniteField { p, degree, q, modulus: m, exp: Vec::new(), log: Vec::new() };
        field.build_tables()?;
        Ok(field)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        if q == 2 {
            self.exp = vec![1];
            self.log = vec![u32::MAX, 0];
            return Ok(());
        }
        for g in 2..q {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![u32::MAX; q as usize];
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..(q - 1) {
                if log[x as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[x as usize] = k;
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if ok && x == 1 {
                self.exp = exp;
                self.log = log;
                return Ok(());
            }
        }
        Err(Error::Config("no primitive element found".into()))
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let n = self.degree as usize;
        let mut prod = vec![0u64; 2 * n];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        let p = self.p as u64;
        for k in (n..2 * n).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                prod[k - n + i] += (p - self.modulus[i] as u64) * c;
            }
        }
        let d: Vec<u32> = prod[..n].iter().map(|&c| (c % p) as u32).collect();
        self.encode(&d)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// The class of the polynomial generator `t`.
    pub fn generator(&self) -> u32 {
        if self.degree == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            self.p
        }
    }

    pub fn from_int(&self, a: i64) -> u32 {
        mod_p(a, self.p)
    }

    /// Element with the given polynomial coefficients (low to high), reduced.
    pub fn from_coeffs(&self, c: &[i64]) -> u32 {
        let mut acc = 0u32;
        let t = self.generator();
        let mut pw = 1u32;
        for &ci in c {
            acc = self.add(acc, self.mul(self.from_int(ci), pw));
            pw = self.mul(pw, t);
        }
        acc
    }

    /// Polynomial coefficients of `x` in the basis `1, t, …, t^{degree-1}`.
    pub fn to_coeffs(&self, x: u32) -> Vec<u32> {
        self.digits(x)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let k = self.log[a as usize];
        Some(self.exp[((self.q - 1 - k) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
        self.exp[k as usize]
    }

    /// `x ↦ x^{p^k}`.
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        let k = k % self.degree;
        self.pow(a, (self.p as u64).pow(k))
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2)
    }

    /// Canonical textual form: an integer for prime fields, else a
    /// polynomial in `t` such as `2+t^2`.
    pub fn format(&self, a: u32) -> String {
        if self.degree == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join("+"))
        }
    }

    /// Uniformly random element.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    /// Uniformly random nonzero element.
    pub fn random_nonzero<R: rand::Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo `m` in `F_p[x]` (coefficients low to high).
pub fn poly_rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let mut m = m.to_vec();
    trim(&mut r);
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for i in 0..=dm {
            let t = (r[k + i] as u64 + (p as u64 - c) * m[i] as u64 % p as u64) % p as u64;
            r[k + i] = t as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem_mod_p(&prod, m, p)
}

fn poly_gcd_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem_mod_p(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `m` (monic, degree `n`) is irreducible over `F_p` iff
/// `x^{p^n} ≡ x` and `gcd(x^{p^{n/r}} - x, m) = 1` for every prime `r | n`.
pub fn poly_irreducible_mod_p(m: &[u32], p: u32) -> bool {
    let mut m = m.to_vec();
    trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    let frob_power = |k: usize| -> Vec<u32> {
        let mut x = vec![0, 1];
        for _ in 0..k {
            let mut acc = vec![1u32];
            let mut base = x.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, &m, p);
                }
                base = poly_mulmod(&base, &base, &m, p);
                e >>= 1;
            }
            x = acc;
        }
        x
    };
    let minus_x = |mut v: Vec<u32>| -> Vec<u32> {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        trim(&mut v);
        v
    };
    if !minus_x(frob_power(n)).is_empty() {
        return false;
    }
    let mut r = 2;
    let mut rest = n;
    while rest > 1 {
        if rest.is_multiple_of(r) {
            let g = poly_gcd_mod_p(&minus_x(frob_power(n / r)), &m, p);
            if g.len() > 1 {
                return false;
            }
            while rest.is_multiple_of(r) {
                rest /= r;
            }
        }
        r += 1;
    }
    true
}
