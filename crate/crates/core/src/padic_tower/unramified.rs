//! Arithmetic in `Z_p[α] = Z_p[X]/(u)` modulo a fixed power of `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::finite_field::FiniteField;

pub(crate) struct Unr {
    p: BigInt,
    modulus: BigInt,
    digits: i64,
    u: Vec<BigInt>,
    f: usize,
}

impl Unr {
    pub(crate) fn new(p: u32, u: &[BigInt], digits: i64) -> Self {
        let pb = BigInt::from(p);
        Unr { modulus: pb.pow(digits as u32), p: pb, digits, u: u.to_vec(), f: u.len() - 1 }
    }

    pub(crate) fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.f];
        v[0] = BigInt::one();
        v
    }

    pub(crate) fn reduce_big(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for x in v.iter_mut() {
            *x = x.mod_floor(&self.modulus);
        }
    }

    pub(crate) fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = unr_mul(&self.u, a, b);
        self.reduce(&mut out);
        out
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&mut out);
        out
    }

    fn scale(&self, a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = a.iter().map(|x| x * c).collect();
        self.reduce(&mut out);
        out
    }

    /// Inverse of a unit by Newton iteration from the residue-field inverse.
    pub(crate) fn inverse_unit(&self, x: &[BigInt]) -> Vec<BigInt> {
        let p32: u32 = (&self.p).try_into().expect("small prime");
        let u_small: Vec<i64> = self.u.iter().map(|c| c.mod_floor(&self.p).try_into().unwrap()).collect();
        let field = FiniteField::new(p32, &u_small).expect("validated modulus");
        let xr: Vec<i64> = x.iter().map(|c| c.mod_floor(&self.p).try_into().unwrap()).collect();
        let inv = field.inv(field.from_coeffs(&xr)).expect("unit");
        let mut y: Vec<BigInt> = field.to_coeffs(inv).into_iter().map(BigInt::from).collect();
        let two = BigInt::from(2);
        let mut correct = 1i64;
        while correct < self.digits {
            let xy = self.mul(x, &y);
            let t = self.sub(&self.scale(&self.one(), &two), &xy);
            y = self.mul(&y, &t);
            correct *= 2;
        }
        y
    }

    fn eval_u(&self, y: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        // Horner for u(y) and u'(y).
        let mut val = vec![BigInt::zero(); self.f];
        let mut der = vec![BigInt::zero(); self.f];
        for c in self.u.iter().rev() {
            der = self.mul(&der, y);
            for (d, v) in der.iter_mut().zip(&val) {
                *d += v;
            }
            val = self.mul(&val, y);
            val[0] += c;
            self.reduce(&mut val);
            self.reduce(&mut der);
        }
        (val, der)
    }

    /// The root of `u` congruent to `α^p`, i.e. the arithmetic Frobenius of `α`.
    pub(crate) fn frobenius_of_alpha(&self) -> Vec<BigInt> {
        let mut alpha = vec![BigInt::zero(); self.f];
        if self.f == 1 {
            // α is the rational root of the linear u.
            alpha[0] = self.reduce_big(&-&self.u[0]);
            return alpha;
        }
        alpha[1] = BigInt::one();
        let mut y = self.one();
        let p_usize: usize = (&self.p).try_into().unwrap();
        for _ in 0..p_usize {
            y = self.mul(&y, &alpha);
        }
        let mut correct = 1i64;
        while correct < self.digits {
            let (val, der) = self.eval_u(&y);
            let step = self.mul(&val, &self.inverse_unit(&der));
            y = self.sub(&y, &step);
            correct *= 2;
        }
        y
    }
}

/// Product in `Z[X]/(u)` without modular reduction of the coefficients.
pub(crate) fn unr_mul(u: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let f = u.len() - 1;
    if f == 1 {
        return vec![&a[0] * &b[0]];
    }
    let mut prod = vec![BigInt::zero(); 2 * f - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (f..2 * f - 1).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..f {
            prod[k - f + i] -= &c * &u[i];
        }
    }
    prod.truncate(f);
    prod
}
