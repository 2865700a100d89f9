//! Change of basis from group elements to the monomials `b^α`.

use std::collections::{BTreeMap, HashMap};

use super::AlgebraContext;
use crate::error::Result;
use crate::int_ring::RElem;
use crate::rational::{q, Q};

/// Monomial coefficients `α ↦ c_α` (sharing the series' denominator).
pub type MonomialMap = BTreeMap<Vec<u32>, RElem>;

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    t0.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Running binomial `C(n, k)` modulo `p^prec`, split as unit times `p^v`.
struct BinomWalk {
    p: u64,
    prec: u32,
    modulus: u64,
    n: u64,
    k: u64,
    unit: u64,
    v: u32,
}

impl BinomWalk {
    fn new(n: u64, p: u64, prec: u32) -> Self {
        BinomWalk { p, prec, modulus: p.pow(prec), n, k: 0, unit: 1, v: 0 }
    }

    fn value(&self) -> u64 {
        if self.v >= self.prec {
            0
        } else {
            mulmod(self.unit, self.p.pow(self.v), self.modulus)
        }
    }

    /// Advance from `C(n, k)` to `C(n, k + 1)`.
    fn step(&mut self) {
        let mut num = self.n - self.k;
        let mut den = self.k + 1;
        while num.is_multiple_of(self.p) {
            num /= self.p;
            self.v += 1;
        }
        while den.is_multiple_of(self.p) {
            den /= self.p;
            self.v -= 1;
        }
        self.unit = mulmod(self.unit, num % self.modulus, self.modulus);
        self.unit = mulmod(self.unit, inv_mod(den % self.modulus, self.modulus), self.modulus);
        self.k += 1;
    }
}

/// `C(n, k) mod p^prec`.
pub fn binom_mod(n: u64, k: u64, p: u64, prec: u32) -> u64 {
    if k > n {
        return 0;
    }
    let mut w = BinomWalk::new(n, p, prec);
    for _ in 0..k {
        w.step();
    }
    w.value()
}

impl AlgebraContext {
    /// Monomial expansion of the canonical lift of `x`. With a `prune`
    /// bound, monomials of `r_N`-degree `τα/p^N ≥ prune` are dropped.
    pub fn monomials(&self, x: &super::IwasawaSeries, radius: u32, prune: Option<Q>) -> Result<MonomialMap> {
        let cr = &self.coeff;
        let p = self.group.p() as u64;
        let d = self.dim();
        let scale = q((p as i64).pow(radius), 1);
        let weights: Vec<Q> = self.omegas().into_iter().map(|w| w / scale).collect();
        // Entries: (α_0..α_{i-1}, k_i..k_{d-1}) ↦ coefficient, plus the
        // partial degree of the transformed prefix.
        let mut state: HashMap<Vec<u64>, RElem> = HashMap::new();
        for (key, c) in &x.terms {
            let coords = self.coords_of(key)?;
            let e = state.entry(coords.as_ref().clone()).or_insert_with(|| cr.zero());
            cr.add_assign(e, c);
        }
        for i in 0..d {
            let mut next: HashMap<Vec<u64>, RElem> = HashMap::new();
            for (idx, c) in &state {
                if cr.is_zero(c) {
                    continue;
                }
                let partial = idx[..i].iter().zip(&weights).fold(q(0, 1), |acc, (&a, &w)| acc + w * q(a as i64, 1));
                let k = idx[i];
                let mut walk = BinomWalk::new(k, p, cr.prec());
                for a in 0..=k {
                    let deg = partial + weights[i] * q(a as i64, 1);
                    if prune.is_some_and(|b| deg >= b) {
                        break;
                    }
                    let bv = walk.value();
                    if bv != 0 {
                        let mut idx2 = idx.clone();
                        idx2[i] = a;
                        let term = cr.scale(c, bv as i64);
                        let e = next.entry(idx2).or_insert_with(|| cr.zero());
                        cr.add_assign(e, &term);
                    }
                    if a < k {
                        walk.step();
                    }
                }
            }
            state = next;
        }
        Ok(state
            .into_iter()
            .filter(|(_, c)| !cr.is_zero(c))
            .map(|(k, c)| (k.into_iter().map(|a| a as u32).collect(), c))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_mod(5, 2, 3, 4), 10);
        assert_eq!(binom_mod(9, 3, 3, 2), 84 % 9);
        assert_eq!(binom_mod(27, 9, 3, 5), 4686825 % 243);
        assert_eq!(binom_mod(4, 7, 3, 3), 0);
        assert_eq!(binom_mod(0, 0, 3, 3), 1);
    }
}
