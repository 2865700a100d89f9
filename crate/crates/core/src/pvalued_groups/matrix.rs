//! 2×2 matrices over `O / p^P` and the exponential and logarithm series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::int_ring::{IntRing, RElem};
use crate::rational::{q, Q};

/// Entries `[a, b, c, d]` of `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [RElem; 4]);

#[derive(Clone, Debug, Serialize)]
pub struct MatrixDigits {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl Mat2 {
    pub fn identity(r: &IntRing) -> Self {
        Mat2([r.one(), r.zero(), r.zero(), r.one()])
    }

    pub fn zero(r: &IntRing) -> Self {
        Mat2([r.zero(), r.zero(), r.zero(), r.zero()])
    }

    pub fn from_entries(a: RElem, b: RElem, c: RElem, d: RElem) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn a(&self) -> &RElem {
        &self.0[0]
    }
    pub fn b(&self) -> &RElem {
        &self.0[1]
    }
    pub fn c(&self) -> &RElem {
        &self.0[2]
    }
    pub fn d(&self) -> &RElem {
        &self.0[3]
    }

    pub fn add(&self, r: &IntRing, o: &Self) -> Self {
        Mat2(std::array::from_fn(|k| r.add(&self.0[k], &o.0[k])))
    }

    pub fn sub(&self, r: &IntRing, o: &Self) -> Self {
        Mat2(std::array::from_fn(|k| r.sub(&self.0[k], &o.0[k])))
    }

    pub fn scale(&self, r: &IntRing, x: &[u64]) -> Self {
        Mat2(std::array::from_fn(|k| r.mul(&self.0[k], x)))
    }

    pub fn scale_int(&self, r: &IntRing, n: i64) -> Self {
        Mat2(std::array::from_fn(|k| r.scale(&self.0[k], n)))
    }

    pub fn mul(&self, r: &IntRing, o: &Self) -> Self {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([
            r.add(&r.mul(a, e), &r.mul(b, g)),
            r.add(&r.mul(a, f), &r.mul(b, h)),
            r.add(&r.mul(c, e), &r.mul(d, g)),
            r.add(&r.mul(c, f), &r.mul(d, h)),
        ])
    }

    pub fn det(&self, r: &IntRing) -> RElem {
        r.sub(&r.mul(&self.0[0], &self.0[3]), &r.mul(&self.0[1], &self.0[2]))
    }

    /// Inverse when the determinant is a unit.
    pub fn inverse(&self, r: &IntRing) -> Option<Self> {
        let di = r.inverse(&self.det(r))?;
        let [a, b, c, d] = &self.0;
        Some(Mat2([r.mul(d, &di), r.mul(&r.neg(b), &di), r.mul(&r.neg(c), &di), r.mul(a, &di)]))
    }

    pub fn pow(&self, r: &IntRing, n: u64) -> Self {
        let mut acc = Mat2::identity(r);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(r, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(r, &base);
            }
        }
        acc
    }

    pub fn bracket(&self, r: &IntRing, o: &Self) -> Self {
        self.mul(r, o).sub(r, &o.mul(r, self))
    }

    /// Minimal `ϖ`-digit valuation of the entries (`None` when zero).
    pub fn valuation(&self, r: &IntRing) -> Option<u32> {
        self.0.iter().filter_map(|x| r.valuation(x)).min()
    }

    pub fn is_zero(&self, r: &IntRing) -> bool {
        self.0.iter().all(|x| r.is_zero(x))
    }

    pub fn reduce(&self, to: &IntRing) -> Self {
        Mat2(std::array::from_fn(|k| to.reduce_from(&self.0[k])))
    }

    pub fn div_p_exact(&self, r: &IntRing, k: u32) -> Option<Self> {
        let mut out = self.clone();
        for x in out.0.iter_mut() {
            *x = r.div_p_exact(x, k)?;
        }
        Some(out)
    }

    pub fn digits(&self, r: &IntRing) -> MatrixDigits {
        MatrixDigits { a: r.format(&self.0[0]), b: r.format(&self.0[1]), c: r.format(&self.0[2]), d: r.format(&self.0[3]) }
    }
}

fn vp_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn ceil_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut x = 1u64;
    while x < n {
        x = x.saturating_mul(p);
        k += 1;
    }
    k
}

/// `p`-adic valuation (as a rational) of a nonzero matrix.
fn rational_valuation(r: &IntRing, x: &Mat2) -> Option<Q> {
    x.valuation(r).map(|v| q(v as i64, r.e() as i64))
}

/// Number of series terms after which every remaining term has
/// valuation at least `target`, given per-term lower bounds.
fn terms_needed(target: Q, bound: impl Fn(u64) -> Q) -> u64 {
    let mut n = 1u64;
    let mut last_bad = 0u64;
    // The bounds grow linearly, so a window of consecutive good terms
    // twice as long as the last bad index suffices.
    while n <= 4 * last_bad + 16 {
        if bound(n) < target {
            last_bad = n;
        }
        n += 1;
    }
    last_bad
}

/// `exp(X)` for `v_p(X) > 1/(p-1)`, accurate modulo `p^P` of the ring.
pub fn mat_exp(r: &IntRing, x: &Mat2) -> Result<Mat2> {
    let p = r.p();
    let Some(vx) = rational_valuation(r, x) else {
        return Ok(Mat2::identity(r));
    };
    let excess = vx - q(1, p as i64 - 1);
    if excess <= q(0, 1) {
        return Err(Error::Convergence(format!("exp needs valuation > 1/(p-1), got {vx}")));
    }
    let target = q(r.prec() as i64, 1);
    let n_max = terms_needed(target, |n| vx * q(n as i64, 1) - q(n as i64 - 1, p as i64 - 1));
    let guard = ceil_log(n_max + 1, p) + 2;
    let g = r.with_prec(r.prec() + guard)?;
    let xg = lift(x, &g);
    let mut term = Mat2::identity(&g);
    let mut acc = Mat2::identity(&g);
    for n in 1..=n_max {
        let prod = term.mul(&g, &xg);
        let v = vp_u64(n, p);
        let divided = prod
            .div_p_exact(&g, v)
            .ok_or_else(|| Error::Precision("exp term not divisible as expected".into()))?;
        let unit = (n / p.pow(v)) as i64;
        let inv = g.inverse(&g.from_int(unit)).expect("unit");
        term = divided.scale(&g, &inv);
        acc = acc.add(&g, &term);
    }
    Ok(acc.reduce(r))
}

/// `log(1 + Y)` for `v_p(Y) > 1/(p-1)`, accurate modulo `p^P`.
pub fn mat_log(r: &IntRing, g: &Mat2) -> Result<Mat2> {
    let p = r.p();
    let y = g.sub(r, &Mat2::identity(r));
    let Some(vy) = rational_valuation(r, &y) else {
        return Ok(Mat2::zero(r));
    };
    if vy <= q(1, p as i64 - 1) {
        return Err(Error::Convergence(format!("log needs valuation > 1/(p-1), got {vy}")));
    }
    let target = q(r.prec() as i64, 1);
    let n_max = terms_needed(target, |n| vy * q(n as i64, 1) - q(vp_u64(n, p) as i64, 1));
    let guard = ceil_log(n_max + 1, p) + 2;
    let gr = r.with_prec(r.prec() + guard)?;
    let yg = lift(&y, &gr);
    let mut power = Mat2::identity(&gr);
    let mut acc = Mat2::zero(&gr);
    for n in 1..=n_max {
        power = power.mul(&gr, &yg);
        let v = vp_u64(n, p);
        let divided = power
            .div_p_exact(&gr, v)
            .ok_or_else(|| Error::Precision("log term not divisible as expected".into()))?;
        let unit = (n / p.pow(v)) as i64;
        let inv = gr.inverse(&gr.from_int(if n % 2 == 1 { unit } else { -unit })).expect("unit");
        acc = acc.add(&gr, &divided.scale(&gr, &inv));
    }
    Ok(acc.reduce(r))
}

/// Lift representatives into a ring of higher precision.
pub fn lift(x: &Mat2, to: &IntRing) -> Mat2 {
    Mat2(std::array::from_fn(|k| {
        let mut v = x.0[k].clone();
        v.resize(to.dim(), 0);
        v
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_tower::build_tower;

    #[test]
    fn nilpotent_log_and_exp() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap();
        let r = IntRing::new(&t, 15).unwrap();
        let x = Mat2::from_entries(r.zero(), r.from_int(9), r.zero(), r.zero());
        let g = mat_exp(&r, &x).unwrap();
        assert_eq!(g, Mat2::from_entries(r.one(), r.from_int(9), r.zero(), r.one()));
        assert_eq!(mat_log(&r, &g).unwrap(), x);
        assert_eq!(mat_exp(&r, &Mat2::zero(&r)).unwrap(), Mat2::identity(&r));
    }

    #[test]
    fn exp_log_roundtrip_diagonal() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap();
        let r = IntRing::new(&t, 12).unwrap();
        let w = r.varpi();
        let x = Mat2::from_entries(r.mul(&w, &r.from_int(3)), r.from_int(9), r.from_int(27), r.from_int(-3));
        let g = mat_exp(&r, &x).unwrap();
        assert_eq!(mat_log(&r, &g).unwrap(), x);
    }

    #[test]
    fn rejects_outside_domain() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap();
        let r = IntRing::new(&t, 10).unwrap();
        let x = Mat2::from_entries(r.zero(), r.from_int(1), r.zero(), r.zero());
        assert!(matches!(mat_exp(&r, &x), Err(Error::Convergence(_))));
    }
}
