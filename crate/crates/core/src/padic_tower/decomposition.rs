//! Idempotent decomposition data of `L ⊗ K`: the unramified coefficients
//! `β_i`, the ramified coefficients `γ_j`, the defect `R_K` and the units
//! `μ_j = ϖ^{R_K + j} γ_j`.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::element::FieldElement;
use super::FieldTower;
use crate::error::{Error, Result};
use crate::rational::{q, ExtQ, Q};

/// Apply `Frob^k` to `x`, acting on `α`-coordinates and fixing `ϖ`.
pub fn frobenius(tower: &Arc<FieldTower>, x: &FieldElement, k: i64) -> Result<FieldElement> {
    let mixes = x.shift() != 0
        || x.coords().iter().enumerate().any(|(idx, c)| idx >= tower.f && !c.is_zero());
    if !tower.rational_eisenstein && tower.f > 1 && mixes {
        return Err(Error::Unsupported(
            "Frobenius is only defined on the unramified part when the Eisenstein polynomial is not rational".into(),
        ));
    }
    Ok(x.frobenius_raw(k))
}

/// Coefficients of `P(X) / (X - r)` for a monic `P` with root `r`, given the
/// coefficients of `P` (low to high) as field elements.
fn synthetic_quotient(coeffs: &[FieldElement], root: &FieldElement) -> Vec<FieldElement> {
    let d = coeffs.len() - 1;
    let mut out = vec![coeffs[d].clone(); d];
    for j in (1..d).rev() {
        out[j - 1] = coeffs[j].add(&root.mul(&out[j]));
    }
    out
}

fn derivative_at(coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
    let t = coeffs[0].tower().clone();
    let mut acc = FieldElement::zero(&t);
    for k in (1..coeffs.len()).rev() {
        acc = acc.mul(x).add(&coeffs[k].mul_int(k as i64));
    }
    acc
}

/// `β_j = d_j / u'(α)` where `u(X) / (X - α) = Σ d_j X^j`.
///
/// The class idempotent for `Frob^k` is `Σ_j Frob^k(β_j) ⊗ α^j`.
pub fn unramified_idempotents(tower: &Arc<FieldTower>) -> Result<Vec<FieldElement>> {
    let u: Vec<FieldElement> = tower.u_poly.iter().map(|c| FieldElement::from_bigint(tower, c.clone())).collect();
    let alpha = FieldElement::alpha(tower);
    let d = synthetic_quotient(&u, &alpha);
    let du = derivative_at(&u, &alpha);
    let inv = du.inverse()?;
    Ok(d.iter().map(|x| x.mul(&inv).with_precision(tower.default_prec)).collect())
}

#[derive(Clone, Debug)]
pub struct DecompositionData {
    pub beta: Vec<FieldElement>,
    pub gamma: Vec<FieldElement>,
    pub r_k: i64,
    pub mu: Vec<FieldElement>,
    pub mu_residues: Vec<u32>,
}

impl DecompositionData {
    /// `v_p(γ_j)` for each `j`.
    pub fn gamma_valuations(&self) -> Result<Vec<ExtQ>> {
        self.gamma.iter().map(|g| g.valuation()).collect()
    }

    pub fn summary(&self, tower: &FieldTower) -> DecompositionSummary {
        let field = tower.residue_field();
        DecompositionSummary {
            tower: tower.label(),
            r_k: self.r_k,
            beta: self.beta.iter().map(|x| x.digit_string()).collect(),
            gamma: self.gamma.iter().map(|x| x.digit_string()).collect(),
            gamma_valuations: self
                .gamma
                .iter()
                .map(|g| g.valuation().map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()))
                .collect(),
            mu_residues: self.mu_residues.iter().map(|&m| field.format(m)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSummary {
    pub tower: String,
    pub r_k: i64,
    pub beta: Vec<String>,
    pub gamma: Vec<String>,
    pub gamma_valuations: Vec<String>,
    pub mu_residues: Vec<String>,
}

/// The ramified decomposition data, with the valuation law on `γ_j` checked.
pub fn ramified_idempotent_data(tower: &Arc<FieldTower>) -> Result<DecompositionData> {
    let e = tower.e as i64;
    let coeffs: Vec<FieldElement> = tower.e_poly.iter().map(|c| FieldElement::from_coords(tower, c)).collect();
    let varpi = FieldElement::varpi(tower);
    let quotient = synthetic_quotient(&coeffs, &varpi);
    let de = derivative_at(&coeffs, &varpi);
    let de_val = de.valuation()?.finite().ok_or_else(|| Error::SelfCheck("E'(varpi) vanishes".into()))?;
    // R/e = v(E'(ϖ)) + 1/e - 1
    let r_q: Q = de_val * q(e, 1) + q(1, 1) - q(e, 1);
    if *r_q.denom() != 1 || *r_q.numer() < 0 {
        return Err(Error::SelfCheck(format!("defect {r_q} is not a nonnegative integer")));
    }
    let r_k = *r_q.numer();
    let inv = de.inverse()?;
    let gamma: Vec<FieldElement> = quotient.iter().map(|c| c.mul(&inv)).collect();
    let mut mu = Vec::with_capacity(tower.e);
    let mut mu_residues = Vec::with_capacity(tower.e);
    for (j, g) in gamma.iter().enumerate() {
        let expected = ExtQ::Finite(q(-(j as i64) - r_k, e));
        let v = g.valuation()?;
        if v != expected {
            return Err(Error::SelfCheck(format!("v(gamma_{j}) = {v}, expected {expected}")));
        }
        let m = g.mul_varpi_pow(r_k + j as i64);
        let res = m.residue()?;
        if res == 0 {
            return Err(Error::SelfCheck(format!("mu_{j} is not a unit")));
        }
        mu.push(m);
        mu_residues.push(res);
    }
    if (r_k == 0) != !(tower.e as u32).is_multiple_of(tower.p) {
        return Err(Error::SelfCheck(format!("R_K = {r_k} contradicts tameness of e = {}", tower.e)));
    }
    Ok(DecompositionData { beta: unramified_idempotents(tower)?, gamma, r_k, mu, mu_residues })
}

/// Elements of `K[Y, X] / (u(Y), E_Y(X))`, the model of `K ⊗_{Q_p} K` in
/// which the right factor is written in `Y = 1 ⊗ α`, `X = 1 ⊗ ϖ`.
struct Tensor {
    tower: Arc<FieldTower>,
}

impl Tensor {
    fn zero(&self) -> Vec<FieldElement> {
        vec![FieldElement::zero(&self.tower); self.tower.f * self.tower.e]
    }

    fn one(&self) -> Vec<FieldElement> {
        let mut v = self.zero();
        v[0] = FieldElement::one(&self.tower);
        v
    }

    fn add(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    fn sub(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    fn unr_mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let t = &self.tower;
        let f = t.f;
        let zero = FieldElement::zero(t);
        let mut prod = vec![zero; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_exact() && x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&x.mul(y));
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k].clone();
            for i in 0..f {
                prod[k - f + i] = prod[k - f + i].sub(&c.mul(&FieldElement::from_bigint(t, t.u_poly[i].clone())));
            }
        }
        prod.truncate(f);
        prod
    }

    fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let t = &self.tower;
        let (f, e) = (t.f, t.e);
        let mut prod: Vec<Vec<FieldElement>> = vec![vec![FieldElement::zero(t); f]; 2 * e - 1];
        for ja in 0..e {
            for jb in 0..e {
                let m = self.unr_mul(&a[ja * f..(ja + 1) * f], &b[jb * f..(jb + 1) * f]);
                for (acc, v) in prod[ja + jb].iter_mut().zip(m) {
                    *acc = acc.add(&v);
                }
            }
        }
        for d in (e..2 * e - 1).rev() {
            let c = prod[d].clone();
            for k in 0..e {
                let ak: Vec<FieldElement> = t.e_poly[k].iter().map(|x| FieldElement::from_bigint(t, x.clone())).collect();
                let m = self.unr_mul(&ak, &c);
                for (acc, v) in prod[d - e + k].iter_mut().zip(m) {
                    *acc = acc.sub(&v);
                }
            }
        }
        prod.truncate(e);
        prod.into_iter().flatten().collect()
    }

    /// `(zero?, absolute precision in p-digits)` of a tensor element.
    fn zero_check(&self, a: &[FieldElement]) -> (bool, Q) {
        let e = self.tower.e as i64;
        let mut zero = true;
        let mut prec: Option<i64> = None;
        for x in a {
            if !x.is_zero() {
                zero = false;
            }
            if let Some(pr) = x.absolute_precision() {
                prec = Some(prec.map_or(pr, |m: i64| m.min(pr)));
            }
        }
        (zero, q(prec.unwrap_or(i64::MAX / (4 * e)), e))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentReport {
    pub tower: String,
    pub classes: usize,
    /// Each class idempotent `Σ_j Frob^k(β_j) ⊗ α^j` squares to itself.
    pub class_idempotent: bool,
    /// Distinct class idempotents multiply to zero.
    pub class_orthogonal: bool,
    /// The class idempotents sum to one.
    pub class_sum_one: bool,
    /// `1_{ρ_k}² = 1_{ρ_k}` for each supported `k`.
    pub rho_idempotent: bool,
    /// `1_{ρ_k}` lies under its own class and is killed by the others.
    pub rho_in_class: bool,
    /// Minimal absolute precision (in `p`-adic digits) at which the
    /// identities were verified.
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub verified_digits: Q,
}

impl IdempotentReport {
    pub fn all_pass(&self) -> bool {
        self.class_idempotent && self.class_orthogonal && self.class_sum_one && self.rho_idempotent && self.rho_in_class
    }
}

/// Reconstruct the idempotents in `K ⊗ K` and verify the decomposition
/// identities at the tower's working precision.
pub fn check_idempotents(tower: &Arc<FieldTower>) -> Result<IdempotentReport> {
    let data = ramified_idempotent_data(tower)?;
    let ring = Tensor { tower: tower.clone() };
    let f = tower.f;
    let mut digits = q(i64::MAX / 8, 1);
    let mut note = |(z, d): (bool, Q), flag: &mut bool| {
        *flag &= z;
        digits = digits.min(d);
    };

    let mut classes = Vec::with_capacity(f);
    for k in 0..f as i64 {
        let mut c = ring.zero();
        for (i, b) in data.beta.iter().enumerate() {
            c[i] = frobenius(tower, b, k)?;
        }
        classes.push(c);
    }
    let (mut idem, mut orth, mut sum_one) = (true, true, true);
    let mut total = ring.zero();
    for (k, c) in classes.iter().enumerate() {
        note(ring.zero_check(&ring.sub(&ring.mul(c, c), c)), &mut idem);
        for d in &classes[k + 1..] {
            note(ring.zero_check(&ring.mul(c, d)), &mut orth);
        }
        total = ring.add(&total, c);
    }
    note(ring.zero_check(&ring.sub(&total, &ring.one())), &mut sum_one);

    let (mut rho_idem, mut rho_class) = (true, true);
    let supported = f == 1 || tower.rational_eisenstein;
    if supported {
        for k in 0..f {
            let mut r = ring.zero();
            for (i, b) in data.beta.iter().enumerate() {
                let fb = frobenius(tower, b, k as i64)?;
                for (j, g) in data.gamma.iter().enumerate() {
                    r[j * f + i] = fb.mul(g);
                }
            }
            note(ring.zero_check(&ring.sub(&ring.mul(&r, &r), &r)), &mut rho_idem);
            for (l, c) in classes.iter().enumerate() {
                let prod = ring.mul(&r, c);
                if l == k {
                    note(ring.zero_check(&ring.sub(&prod, &r)), &mut rho_class);
                } else {
                    note(ring.zero_check(&prod), &mut rho_class);
                }
            }
        }
    }
    Ok(IdempotentReport {
        tower: tower.label(),
        classes: f,
        class_idempotent: idem,
        class_orthogonal: orth,
        class_sum_one: sum_one,
        rho_idempotent: rho_idem && supported,
        rho_in_class: rho_class && supported,
        verified_digits: digits,
    })
}

#[cfg(test)]
mod tests {
    use super::super::build_tower;
    use super::*;
    use crate::rational::qi;

    fn tower(u: &[i64], e: &[i64]) -> Arc<FieldTower> {
        let e: Vec<Vec<i64>> = e.iter().map(|&c| vec![c]).collect();
        build_tower(3, u, &e, None).unwrap()
    }

    #[test]
    fn sqrt3_gamma() {
        let t = tower(&[0, 1], &[-3, 0, 1]);
        let d = ramified_idempotent_data(&t).unwrap();
        assert_eq!(d.r_k, 0);
        assert_eq!(d.mu_residues, vec![2, 2]);
        // γ_0 = 1/2, γ_1 = 1/(2ϖ)
        let half = FieldElement::from_ratio(&t, 1, 2).unwrap();
        assert_eq!(d.gamma[0], half);
        let g1 = half.div(&FieldElement::varpi(&t)).unwrap();
        assert_eq!(d.gamma[1], g1);
        assert_eq!(d.gamma_valuations().unwrap(), vec![ExtQ::Finite(qi(0)), ExtQ::Finite(q(-1, 2))]);
    }

    #[test]
    fn defects() {
        assert_eq!(ramified_idempotent_data(&tower(&[0, 1], &[-3, 1])).unwrap().r_k, 0);
        assert_eq!(ramified_idempotent_data(&tower(&[0, 1], &[-3, 0, 0, 1])).unwrap().r_k, 3);
        assert_eq!(ramified_idempotent_data(&tower(&[0, 1], &[-3, 0, 0, 0, 1])).unwrap().r_k, 0);
    }

    #[test]
    fn q9_beta() {
        let t = tower(&[1, 0, 1], &[-3, 1]);
        let b = unramified_idempotents(&t).unwrap();
        let half = FieldElement::from_ratio(&t, 1, 2).unwrap();
        assert_eq!(b[0], half);
        assert_eq!(b[1], FieldElement::alpha(&t).mul(&half).neg());
    }

    #[test]
    fn idempotents_hold() {
        for t in [
            tower(&[0, 1], &[-3, 1]),
            tower(&[1, 0, 1], &[-3, 1]),
            tower(&[1, 2, 0, 1], &[-3, 1]),
            tower(&[0, 1], &[-3, 0, 1]),
            tower(&[1, 0, 1], &[-3, 0, 1]),
            tower(&[0, 1], &[-3, 0, 0, 1]),
        ] {
            let r = check_idempotents(&t).unwrap();
            assert!(r.all_pass(), "{r:?}");
            assert!(r.verified_digits >= qi(30), "{r:?}");
        }
    }

    #[test]
    fn frobenius_rejects_mixed() {
        let t = build_tower(3, &[1, 0, 1], &[vec![-3], vec![0, 3], vec![1]], None).unwrap();
        assert!(!t.rational_eisenstein());
        let v = FieldElement::varpi(&t);
        assert!(frobenius(&t, &v, 1).is_err());
        assert!(frobenius(&t, &FieldElement::alpha(&t), 1).is_ok());
    }
}
