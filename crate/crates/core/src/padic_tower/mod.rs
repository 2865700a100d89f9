//! The field tower `K = Q_p[α][ϖ]`: an unramified extension generated by a
//! root `α` of `u_poly`, followed by a totally ramified extension generated by
//! a root `ϖ` of the Eisenstein polynomial `e_poly`.
//!
//! Elements are stored in the integral basis `α^i ϖ^j` (`0 ≤ i < f`,
//! `0 ≤ j < e`) with an explicit `ϖ`-denominator exponent, see
//! [`FieldElement`].

mod decomposition;
mod element;
mod unramified;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use decomposition::{
    check_idempotents, frobenius, ramified_idempotent_data, unramified_idempotents, DecompositionData,
    IdempotentReport,
};
pub use element::FieldElement;

use crate::error::{Error, Result};
use crate::finite_field::{is_prime, poly_irreducible_mod_p, FiniteField};
use unramified::Unr;

/// Sentinel precision for exactly known elements.
pub const EXACT: i64 = i64::MAX / 8;

/// Default absolute precision, in `p`-adic digits (scaled by `e` for `ϖ`-digits).
pub const DEFAULT_DIGITS: i64 = 40;

/// Extra `p`-adic digits carried by the tower's structural constants.
const GUARD_DIGITS: i64 = 24;

#[derive(Debug, Serialize)]
pub struct FieldTower {
    p: u32,
    f: usize,
    e: usize,
    #[serde(serialize_with = "ser_big_vec")]
    u_poly: Vec<BigInt>,
    #[serde(skip)]
    e_poly: Vec<Vec<BigInt>>,
    rational_eisenstein: bool,
    #[serde(skip)]
    quat_a: Option<BigInt>,
    default_prec: i64,
    #[serde(skip)]
    residue: FiniteField,
    #[serde(skip)]
    lc_p: u32,
    #[serde(skip)]
    cap_digits: i64,
    /// `Frob(α)^i` for `0 ≤ i < f`, known modulo `p^cap_digits`.
    #[serde(skip)]
    frob_alpha_powers: Vec<Vec<BigInt>>,
    /// `Q` with `x / ϖ = x·Q / p` for integral `x` of positive valuation.
    #[serde(skip)]
    varpi_inverse_times_p: Vec<BigInt>,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Validate and build a tower.
///
/// `u_poly` is monic of degree `f` with integer coefficients (low to high);
/// `f = 1` with `u_poly = X` is the convention for no unramified part.
/// `e_poly` is monic of degree `e`, each coefficient an `α`-polynomial given
/// by its integer coordinates (low to high, at most `f` entries).
pub fn build_tower(p: u32, u_poly: &[i64], e_poly: &[Vec<i64>], quat_a: Option<i64>) -> Result<Arc<FieldTower>> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::Config(format!("p = {p} must be an odd prime")));
    }
    if u_poly.len() < 2 || *u_poly.last().unwrap() != 1 {
        return Err(Error::Config("unramified polynomial must be monic of degree >= 1".into()));
    }
    let f = u_poly.len() - 1;
    let u_mod: Vec<u32> = u_poly.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
    if !poly_irreducible_mod_p(&u_mod, p) {
        return Err(Error::Config(format!("unramified polynomial {u_poly:?} is reducible modulo {p}")));
    }
    if e_poly.len() < 2 {
        return Err(Error::Config("Eisenstein polynomial must have degree >= 1".into()));
    }
    let e = e_poly.len() - 1;
    let mut coeffs: Vec<Vec<BigInt>> = Vec::with_capacity(e + 1);
    for c in e_poly {
        if c.len() > f {
            return Err(Error::Config(format!("coefficient {c:?} has more than f = {f} coordinates")));
        }
        let mut v: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        v.resize(f, BigInt::zero());
        coeffs.push(v);
    }
    let lead = &coeffs[e];
    if !(lead[0].is_one() && lead[1..].iter().all(|x| x.is_zero())) {
        return Err(Error::Config("Eisenstein polynomial must be monic".into()));
    }
    let pb = BigInt::from(p);
    for (k, c) in coeffs[..e].iter().enumerate() {
        if c.iter().any(|x| !(x % &pb).is_zero()) {
            return Err(Error::Config(format!("coefficient of X^{k} is not divisible by p: not Eisenstein")));
        }
    }
    let u_big: Vec<BigInt> = u_poly.iter().map(|&c| BigInt::from(c)).collect();
    let residue = FiniteField::new(p, u_poly)?;
    // a_0 = p·w with w a unit.
    let w: Vec<BigInt> = coeffs[0].iter().map(|x| x / &pb).collect();
    let w_res = residue.from_coeffs(&w.iter().map(|x| (x % &pb).try_into().unwrap_or(0i64)).collect::<Vec<_>>());
    if w_res == 0 {
        return Err(Error::Config("constant coefficient must have valuation exactly 1: not Eisenstein".into()));
    }
    let rational_eisenstein = coeffs.iter().all(|c| c[1..].iter().all(|x| x.is_zero()));
    if let Some(a) = quat_a {
        let ar = residue.from_int(a);
        if ar == 0 {
            return Err(Error::Config("quaternion parameter must be a unit".into()));
        }
        if residue.is_square(ar) {
            return Err(Error::Config(format!(
                "quaternion parameter {a} is a square in the residue field, so it does not generate the unramified quadratic extension"
            )));
        }
    }
    let lc_p = residue.neg(residue.inv(w_res).expect("unit"));
    let default_prec = DEFAULT_DIGITS * e as i64;
    let cap_digits = DEFAULT_DIGITS + GUARD_DIGITS;
    let unr = Unr::new(p, &u_big, cap_digits);
    let frob_alpha = unr.frobenius_of_alpha();
    let mut frob_alpha_powers = vec![unr.one()];
    for _ in 1..f {
        let last = frob_alpha_powers.last().unwrap().clone();
        frob_alpha_powers.push(unr.mul(&last, &frob_alpha));
    }
    let w_inv = unr.inverse_unit(&w);
    // Q = -(ϖ^{e-1} + a_{e-1} ϖ^{e-2} + … + a_1) · w^{-1}
    let mut q_coeffs = vec![BigInt::zero(); f * e];
    for j in 0..e {
        // coefficient of ϖ^j is a_{j+1} (with a_e = 1)
        let a = &coeffs[j + 1];
        let t = unr.mul(a, &w_inv);
        for i in 0..f {
            q_coeffs[j * f + i] = unr.reduce_big(&(-&t[i]));
        }
    }
    Ok(Arc::new(FieldTower {
        p,
        f,
        e,
        u_poly: u_big,
        e_poly: coeffs,
        rational_eisenstein,
        quat_a: quat_a.map(BigInt::from),
        default_prec,
        residue,
        lc_p,
        cap_digits,
        frob_alpha_powers,
        varpi_inverse_times_p: q_coeffs,
    }))
}

impl FieldTower {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Unramified degree `f`.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Ramification index `e_K`.
    pub fn e(&self) -> usize {
        self.e
    }

    /// `[K : Q_p] = e_K · f`.
    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    pub fn rational_eisenstein(&self) -> bool {
        self.rational_eisenstein
    }

    pub fn quat_a(&self) -> Option<&BigInt> {
        self.quat_a.as_ref()
    }

    /// Default absolute precision in `ϖ`-digits.
    pub fn default_prec(&self) -> i64 {
        self.default_prec
    }

    /// Largest absolute precision (in `ϖ`-digits) supported by the cached
    /// structural constants.
    pub fn max_prec(&self) -> i64 {
        self.cap_digits * self.e as i64
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    /// Residue of the unit `p / ϖ^e`.
    pub fn residue_of_p_over_varpi_e(&self) -> u32 {
        self.lc_p
    }

    pub fn u_poly(&self) -> &[BigInt] {
        &self.u_poly
    }

    /// Coefficients `a_0, …, a_e` of the Eisenstein polynomial as
    /// `α`-coordinate vectors.
    pub fn e_poly(&self) -> &[Vec<BigInt>] {
        &self.e_poly
    }

    /// Small-integer form of the Eisenstein coefficients.
    pub fn e_poly_i64(&self) -> Vec<Vec<i64>> {
        self.e_poly.iter().map(|c| c.iter().map(big_to_i64).collect()).collect()
    }

    pub fn u_poly_i64(&self) -> Vec<i64> {
        self.u_poly.iter().map(big_to_i64).collect()
    }

    /// Human-readable name such as `Q_3[X^2-3]`.
    pub fn label(&self) -> String {
        let mut s = if self.f == 1 { format!("Q_{}", self.p) } else { format!("Q_{}^{}", self.p, self.f) };
        if self.e > 1 {
            s.push_str(&format!("[{}]", format_eisenstein(&self.e_poly_i64())));
        }
        s
    }

    /// The tower for `K[√a]` in the quaternion case: unramified part
    /// `Q_p[√a]` (this requires `f = 1`), same Eisenstein polynomial.
    pub fn quaternion_extension(&self) -> Result<Arc<FieldTower>> {
        let a = self
            .quat_a
            .as_ref()
            .ok_or_else(|| Error::Config("quaternion case requires the parameter a".into()))?;
        if self.f != 1 {
            return Err(Error::Unsupported("quaternion case is implemented for f = 1 only".into()));
        }
        if !self.rational_eisenstein {
            return Err(Error::Unsupported("quaternion case requires a rational Eisenstein polynomial".into()));
        }
        let a = big_to_i64(a);
        let e_poly: Vec<Vec<i64>> = self.e_poly_i64().into_iter().map(|c| vec![c[0]]).collect();
        build_tower(self.p, &[-a, 0, 1], &e_poly, None)
    }

    pub(crate) fn frob_alpha_powers(&self) -> &[Vec<BigInt>] {
        &self.frob_alpha_powers
    }

    pub(crate) fn varpi_inverse_times_p(&self) -> &[BigInt] {
        &self.varpi_inverse_times_p
    }

    pub(crate) fn cap_digits(&self) -> i64 {
        self.cap_digits
    }
}

pub(crate) fn big_to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).unwrap_or_else(|_| if x.is_negative() { i64::MIN } else { i64::MAX })
}

fn format_eisenstein(c: &[Vec<i64>]) -> String {
    let mut parts = Vec::new();
    for (k, a) in c.iter().enumerate().rev() {
        let nonzero: Vec<(usize, i64)> = a.iter().copied().enumerate().filter(|(_, x)| *x != 0).collect();
        if nonzero.is_empty() {
            continue;
        }
        let coeff = if nonzero.len() == 1 && nonzero[0].0 == 0 {
            nonzero[0].1.to_string()
        } else {
            let inner: Vec<String> = nonzero
                .iter()
                .map(|(i, x)| if *i == 0 { x.to_string() } else { format!("{x}*a^{i}") })
                .collect();
            format!("({})", inner.join("+"))
        };
        parts.push(match (k, coeff.as_str()) {
            (0, _) => coeff.clone(),
            (1, "1") => "X".to_string(),
            (_, "1") => format!("X^{k}"),
            (1, _) => format!("{coeff}*X"),
            _ => format!("{coeff}*X^{k}"),
        });
    }
    parts.join("+").replace("+-", "-")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn q3() -> Arc<FieldTower> {
        build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap()
    }

    #[test]
    fn base_field() {
        let t = q3();
        assert_eq!((t.f(), t.e(), t.degree()), (1, 1, 1));
        assert!(t.rational_eisenstein());
        assert_eq!(t.label(), "Q_3");
    }

    #[test]
    fn q9_tower() {
        let t = build_tower(3, &[1, 0, 1], &[vec![-3], vec![1]], None).unwrap();
        assert_eq!((t.f(), t.e()), (2, 1));
        assert_eq!(t.residue_field().size(), 9);
    }

    #[test]
    fn ramified_tower() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap();
        assert_eq!((t.f(), t.e(), t.degree()), (1, 2, 2));
        assert_eq!(t.label(), "Q_3[X^2-3]");
        assert_eq!(t.residue_of_p_over_varpi_e(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_tower(2, &[0, 1], &[vec![-2], vec![1]], None).is_err());
        assert!(build_tower(9, &[0, 1], &[vec![-9], vec![1]], None).is_err());
        assert!(build_tower(5, &[1, 0, 1], &[vec![-5], vec![1]], None).is_err());
        assert!(build_tower(3, &[0, 1], &[vec![-9], vec![0], vec![1]], None).is_err());
        assert!(build_tower(3, &[0, 1], &[vec![-3], vec![1], vec![1]], None).is_err());
        assert!(build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(1)).is_err());
        assert!(build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).is_ok());
    }

    #[test]
    fn quaternion_extension_is_q9() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).unwrap();
        let ext = t.quaternion_extension().unwrap();
        assert_eq!((ext.f(), ext.e()), (2, 1));
    }
}
