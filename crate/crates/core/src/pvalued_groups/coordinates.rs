//! Canonical coordinates `g = h_1^{a_1} ⋯ h_d^{a_d}` by level-by-level
//! peeling.

use serde::Serialize;

use super::{GroupContext, GroupElement, Mat2};
use crate::error::{Error, Result};
use crate::int_ring::RElem;

/// Coordinates `a_i` known modulo `p^{digits_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinates {
    pub values: Vec<u64>,
    pub digits: Vec<u32>,
}

impl Coordinates {
    /// True when `a_i ≡ b_i` modulo the common known precision.
    pub fn agrees_with(&self, other: &[u64], p: u64) -> bool {
        self.values.iter().zip(&self.digits).zip(other).all(|((&a, &n), &b)| {
            let m = p.saturating_pow(n);
            a % m == b % m
        })
    }
}

/// Solve `Σ δ_k cols[k] = rhs` over `F_p`.
fn solve_mod_p(cols: &[Vec<u32>], rhs: &[u32], p: u32) -> Option<Vec<u32>> {
    let n = cols.len();
    let rows = rhs.len();
    let pm = p as u64;
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r] as u64).collect();
            row.push(rhs[r] as u64);
            row
        })
        .collect();
    let inv = |a: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (a % pm, pm - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % pm;
            }
            b = b * b % pm;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(sel) = (row..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, sel);
        let iv = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = *x * iv % pm;
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..=n {
                    m[r][c] = (m[r][c] + pm * pm - factor * m[row][c]) % pm;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut sol = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][n] as u32;
    }
    Some(sol)
}

impl GroupContext {
    /// `F_p`-coordinates of the coefficient of `ϖ^k` in `x` (zero when
    /// `v(x) > k`).
    fn digit_symbol(&self, x: &RElem, k: i64, out: &mut Vec<u32>) {
        let r = self.ring();
        let fr = r.residue_field();
        let deg = fr.degree() as usize;
        match r.leading(x) {
            Some((v, lc)) if v as i64 == k => out.extend(fr.to_coeffs(lc).into_iter().take(deg)),
            _ => out.extend(std::iter::repeat_n(0, deg)),
        }
    }

    /// Leading symbol of `g` at residual level `level2`.
    fn level_symbol(&self, g: &Mat2, level2: i64) -> Vec<u32> {
        let r = self.ring();
        let one = r.one();
        let mut out = Vec::new();
        if level2 % 2 == 0 {
            self.digit_symbol(&r.sub(g.a(), &one), level2 / 2, &mut out);
            self.digit_symbol(&r.sub(g.d(), &one), level2 / 2, &mut out);
        } else {
            self.digit_symbol(g.b(), (level2 - 1) / 2, &mut out);
            self.digit_symbol(g.c(), (level2 + 1) / 2, &mut out);
        }
        out
    }

    /// Peel against a basis given by its `p`-power table and raw levels.
    fn peel(
        &self,
        g: &GroupElement,
        power: &dyn Fn(usize, usize) -> Option<Mat2>,
        levels: &[i64],
        limit: i64,
    ) -> Result<Coordinates> {
        let r = self.ring();
        let p = self.p() as u64;
        let e2 = 2 * self.tower().e() as i64;
        let d = levels.len();
        let mut values = vec![0u64; d];
        let mut digits = vec![0u32; d];
        let rebuild = |values: &[u64], digits: &[u32]| -> Mat2 {
            let mut m = Mat2::identity(r);
            for k in 0..d {
                let mut a = values[k];
                let mut acc = Mat2::identity(r);
                for step in 0..digits[k] as usize {
                    let dig = a % p;
                    a /= p;
                    if dig > 0 {
                        if let Some(h) = power(k, step) {
                            acc = acc.mul(r, &h.pow(r, dig));
                        }
                    }
                }
                m = m.mul(r, &acc);
            }
            m
        };
        let mut residual = g.clone();
        loop {
            let level = match self.raw_level2(&residual) {
                Ok(Some(l)) => l,
                Ok(None) => break,
                Err(Error::Indeterminate(_)) => break,
                Err(e) => return Err(e),
            };
            if level >= limit {
                break;
            }
            let mut cand = Vec::new();
            for k in 0..d {
                let diff = level - levels[k];
                if diff >= 0 && diff % e2 == 0 {
                    let m = (diff / e2) as usize;
                    if let Some(h) = power(k, m) {
                        cand.push((k, m, h));
                    }
                }
            }
            let target = self.level_symbol(&residual.m, level);
            let cols: Vec<Vec<u32>> = cand.iter().map(|(_, _, h)| self.level_symbol(h, level)).collect();
            let sol = solve_mod_p(&cols, &target, self.p())
                .ok_or_else(|| Error::NotMember(format!("no coordinate digit solves level {level}")))?;
            let mut progressed = false;
            for ((k, m, _), delta) in cand.iter().zip(sol) {
                if delta != 0 {
                    values[*k] += delta as u64 * p.pow(*m as u32);
                    progressed = true;
                }
            }
            if !progressed {
                return Err(Error::NotMember(format!("nonzero symbol at level {level} outside the basis span")));
            }
            for k in 0..d {
                let m = ((level - levels[k]).div_euclid(e2) + 1).max(0) as u32;
                digits[k] = digits[k].max(m);
            }
            let prod = rebuild(&values, &digits);
            residual = GroupElement { m: prod.inverse(r).expect("unit determinant").mul(r, &g.m) };
        }
        // Digits are known through every level below the stopping point.
        let stop = match self.raw_level2(&residual) {
            Ok(Some(l)) => l.min(limit),
            _ => limit.min(2 * r.varpi_prec() as i64 - 1),
        };
        for k in 0..d {
            let m = if stop > levels[k] { ((stop - levels[k] - 1).div_euclid(e2) + 1) as u32 } else { 0 };
            digits[k] = digits[k].max(m);
            let modulus = p.saturating_pow(digits[k]);
            values[k] %= modulus;
        }
        Ok(Coordinates { values, digits })
    }

    /// Canonical coordinates of `g ∈ H` to working precision.
    pub fn coordinates(&self, g: &GroupElement) -> Result<Coordinates> {
        self.coordinates_below(g, i64::MAX)
    }

    /// Canonical coordinates of `g` modulo the subgroup of elements of raw
    /// level at least `level2_limit`.
    pub fn coordinates_below(&self, g: &GroupElement, level2_limit: i64) -> Result<Coordinates> {
        let levels: Vec<i64> = (0..self.dim()).map(|k| self.basis_level2(k)).collect();
        let power = |k: usize, m: usize| self.ppower(k, m).cloned();
        self.peel(g, &power, &levels, level2_limit)
    }

    /// Membership in `H = (H^{1/p})^p`: peel against the basis
    /// `exp(X_i / p)` of `H^{1/p}` and require every coordinate to be
    /// divisible by `p`.
    pub fn in_h(&self, g: &GroupElement) -> Result<bool> {
        if !self.in_root_group(g) {
            return Ok(false);
        }
        let r = self.ring();
        let mut roots = Vec::with_capacity(self.dim());
        for b in self.basis() {
            let x = b.lie.div_p_exact(r, 1).expect("Lie arguments carry p²");
            roots.push(super::mat_exp(r, &x)?);
        }
        let e2 = 2 * self.tower().e() as i64;
        let levels: Vec<i64> = (0..self.dim()).map(|k| self.basis_level2(k) - e2).collect();
        let power = |k: usize, m: usize| if m == 0 { Some(roots[k].clone()) } else { self.ppower(k, m - 1).cloned() };
        match self.peel(g, &power, &levels, i64::MAX) {
            Ok(c) => Ok(c.values.iter().zip(&c.digits).all(|(&a, &n)| n == 0 || a % self.p() as u64 == 0)),
            Err(Error::NotMember(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let cols = vec![vec![1, 0], vec![1, 1]];
        assert_eq!(solve_mod_p(&cols, &[2, 1], 3), Some(vec![1, 1]));
        assert_eq!(solve_mod_p(&[vec![1, 1]], &[1, 0], 3), None);
    }
}
