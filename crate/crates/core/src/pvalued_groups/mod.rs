//! The groups `H^{1/p}` and `H = (H^{1/p})^p` inside `GL_2(K)` or the unit
//! group of a quaternion algebra over `K`, realized as 2×2 matrices, with
//! their strictly saturated `p`-valuation and ordered basis.

mod axioms;
mod coordinates;
mod matrix;

use std::sync::Arc;

use serde::Serialize;

pub use axioms::{check_p_valuation_axioms, lazard_add, lazard_bracket, lazard_limit_stage, AxiomOutcome, AxiomReport};
pub use coordinates::Coordinates;
pub use matrix::{lift, mat_exp, mat_log, Mat2, MatrixDigits};

use crate::error::{Error, Result};
use crate::int_ring::{IntRing, RElem};
use crate::padic_tower::FieldTower;
use crate::rational::{q, ExtQ, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupCase {
    Gl2,
    #[serde(rename = "quat")]
    Quaternion,
}

impl GroupCase {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gl2" => Ok(GroupCase::Gl2),
            "quat" | "quaternion" => Ok(GroupCase::Quaternion),
            _ => Err(Error::Config(format!("unknown case {s:?} (expected gl2 or quat)"))),
        }
    }

    /// Labels of the four families of basis elements, in basis order.
    pub fn labels(self) -> [char; 4] {
        match self {
            GroupCase::Gl2 => ['e', 'f', 'h', 'z'],
            GroupCase::Quaternion => ['a', 'b', 'c', 'z'],
        }
    }
}

/// One element `x_{i,j} = exp(X)` of the ordered basis.
#[derive(Clone, Debug)]
pub struct BasisElement {
    pub kind: char,
    pub i: usize,
    pub j: usize,
    pub omega: Q,
    /// The Lie argument `X`.
    pub lie: Mat2,
    pub matrix: Mat2,
    /// Raw valuation of `matrix` in units of `1/(2e)`.
    level2: i64,
}

impl BasisElement {
    pub fn label(&self) -> String {
        format!("{}{}_{}", self.kind, self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub m: Mat2,
}

#[derive(Debug)]
pub struct GroupContext {
    case: GroupCase,
    tower: Arc<FieldTower>,
    group_tower: Arc<FieldTower>,
    ring: IntRing,
    shift_c: Q,
    basis: Vec<BasisElement>,
    sqrt_a: Option<RElem>,
    pi: Option<Mat2>,
    /// `h_i^{p^m}` for every basis index `i`.
    ppowers: Vec<Vec<Mat2>>,
}

/// Largest useful default matrix precision (in `p`-adic digits).
const MAX_DEFAULT_PREC: u32 = 20;

fn default_precision(p: u32) -> u32 {
    let mut digits = 0u32;
    let mut x: u128 = 1;
    while x * (p as u128) < (1u128 << 62) {
        x *= p as u128;
        digits += 1;
    }
    digits.saturating_sub(12).clamp(6, MAX_DEFAULT_PREC)
}

/// The shift constant `C = 1 - 1/(p-1) + 1/(4e)`.
pub fn shift_constant(p: u32, e: usize) -> Q {
    q(1, 1) - q(1, p as i64 - 1) + q(1, 4 * e as i64)
}

pub fn build_group_context(case: GroupCase, tower: &Arc<FieldTower>) -> Result<GroupContext> {
    build_group_context_with_precision(case, tower, default_precision(tower.p()))
}

pub fn build_group_context_with_precision(case: GroupCase, tower: &Arc<FieldTower>, prec: u32) -> Result<GroupContext> {
    let group_tower = match case {
        GroupCase::Gl2 => tower.clone(),
        GroupCase::Quaternion => tower.quaternion_extension()?,
    };
    let ring = IntRing::new(&group_tower, prec)?;
    let (f, e) = (tower.f(), tower.e());
    let p = tower.p() as i64;
    let shift_c = shift_constant(tower.p(), e);
    let z = ring.zero();
    let varpi = ring.varpi();
    let p2 = ring.from_int(p * p);
    // p² α^i ϖ^j in the group ring; α is the base tower's generator.
    let scalar = |i: usize, j: usize| -> RElem {
        let alpha_i = match case {
            GroupCase::Gl2 => ring.basis_element(i, 0),
            GroupCase::Quaternion => ring.one(),
        };
        ring.mul(&ring.mul(&p2, &alpha_i), &ring.pow(&varpi, j as u64))
    };
    let (sqrt_a, pi) = match case {
        GroupCase::Gl2 => (None, None),
        GroupCase::Quaternion => {
            let s = ring.basis_element(1, 0);
            let pi = Mat2::from_entries(z.clone(), ring.one(), varpi.clone(), z.clone());
            (Some(s), Some(pi))
        }
    };
    let mut basis = Vec::with_capacity(4 * e * f);
    for kind in case.labels() {
        for i in 0..f {
            for j in 0..e {
                let lie = match (case, kind) {
                    (GroupCase::Gl2, 'e') => Mat2::from_entries(z.clone(), scalar(i, j), z.clone(), z.clone()),
                    (GroupCase::Gl2, 'f') => Mat2::from_entries(z.clone(), z.clone(), scalar(i, j + 1), z.clone()),
                    (GroupCase::Gl2, 'h') => {
                        let t = scalar(i, j + 1);
                        Mat2::from_entries(t.clone(), z.clone(), z.clone(), ring.neg(&t))
                    }
                    (_, 'z') => {
                        let t = scalar(i, j + 1);
                        Mat2::from_entries(t.clone(), z.clone(), z.clone(), t)
                    }
                    (GroupCase::Quaternion, 'a') => pi.as_ref().unwrap().scale(&ring, &scalar(i, j)),
                    (GroupCase::Quaternion, 'b') => {
                        let s = sqrt_a.as_ref().unwrap();
                        let d = Mat2::from_entries(s.clone(), z.clone(), z.clone(), ring.neg(s));
                        d.mul(&ring, pi.as_ref().unwrap()).scale(&ring, &scalar(i, j))
                    }
                    (GroupCase::Quaternion, 'c') => {
                        let s = sqrt_a.as_ref().unwrap();
                        let t = ring.mul(s, &scalar(i, j + 1));
                        Mat2::from_entries(t.clone(), z.clone(), z.clone(), ring.neg(&t))
                    }
                    _ => unreachable!(),
                };
                let matrix = mat_exp(&ring, &lie)?;
                basis.push(BasisElement { kind, i, j, omega: q(0, 1), lie, matrix, level2: 0 });
            }
        }
    }
    let mut ctx = GroupContext {
        case,
        tower: tower.clone(),
        group_tower,
        ring,
        shift_c,
        basis,
        sqrt_a,
        pi,
        ppowers: Vec::new(),
    };
    let lower = q(1, p - 1);
    let upper = q(p, p - 1);
    for k in 0..ctx.basis.len() {
        let g = GroupElement { m: ctx.basis[k].matrix.clone() };
        let level2 = ctx
            .raw_level2(&g)?
            .ok_or_else(|| Error::SelfCheck("basis element is trivial at working precision".into()))?;
        let omega = ctx.omega_from_level2(level2);
        if !(lower < omega && omega < upper) {
            return Err(Error::SelfCheck(format!(
                "basis element {} has omega {omega} outside ({lower}, {upper})",
                ctx.basis[k].label()
            )));
        }
        ctx.basis[k].omega = omega;
        ctx.basis[k].level2 = level2;
    }
    let depth = prec as usize + 2;
    ctx.ppowers = ctx
        .basis
        .iter()
        .map(|b| {
            let mut v = vec![b.matrix.clone()];
            for _ in 1..depth {
                let last = v.last().unwrap();
                v.push(last.pow(&ctx.ring, p as u64));
            }
            v
        })
        .collect();
    Ok(ctx)
}

impl GroupContext {
    pub fn case(&self) -> GroupCase {
        self.case
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// The field over which the matrices live (`K`, or `K[√a]`).
    pub fn group_tower(&self) -> &Arc<FieldTower> {
        &self.group_tower
    }

    pub fn ring(&self) -> &IntRing {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.tower.p()
    }

    pub fn shift_constant(&self) -> Q {
        self.shift_c
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// `d = 4·e·f`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn omegas(&self) -> Vec<Q> {
        self.basis.iter().map(|b| b.omega).collect()
    }

    pub fn sqrt_a(&self) -> Option<&RElem> {
        self.sqrt_a.as_ref()
    }

    /// The matrix of `Π` in the quaternion case.
    pub fn pi(&self) -> Option<&Mat2> {
        self.pi.as_ref()
    }

    /// Matrix precision in `p`-adic digits.
    pub fn precision(&self) -> u32 {
        self.ring.prec()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { m: Mat2::identity(&self.ring) }
    }

    pub fn basis_element(&self, k: usize) -> GroupElement {
        GroupElement { m: self.basis[k].matrix.clone() }
    }

    pub fn element(&self, m: Mat2) -> GroupElement {
        GroupElement { m }
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement { m: x.m.mul(&self.ring, &y.m) }
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        GroupElement { m: x.m.inverse(&self.ring).expect("group elements have unit determinant") }
    }

    pub fn pow(&self, x: &GroupElement, n: u64) -> GroupElement {
        GroupElement { m: x.m.pow(&self.ring, n) }
    }

    /// `x y x^{-1} y^{-1}`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&xy, &self.inverse(&yx))
    }

    /// `h_k^a` via the cached `p`-power table.
    pub fn basis_power(&self, k: usize, a: u64) -> Mat2 {
        let p = self.p() as u64;
        let mut acc = Mat2::identity(&self.ring);
        let mut a = a;
        let mut m = 0usize;
        while a > 0 && m < self.ppowers[k].len() {
            let d = a % p;
            if d > 0 {
                acc = acc.mul(&self.ring, &self.ppowers[k][m].pow(&self.ring, d));
            }
            a /= p;
            m += 1;
        }
        acc
    }

    /// `h_1^{a_1} ⋯ h_d^{a_d}`.
    pub fn from_coordinates(&self, a: &[u64]) -> GroupElement {
        let mut m = Mat2::identity(&self.ring);
        for (k, &x) in a.iter().enumerate() {
            if x != 0 {
                m = m.mul(&self.ring, &self.basis_power(k, x));
            }
        }
        GroupElement { m }
    }

    pub(crate) fn ppower(&self, k: usize, m: usize) -> Option<&Mat2> {
        self.ppowers[k].get(m)
    }

    pub(crate) fn basis_level2(&self, k: usize) -> i64 {
        self.basis[k].level2
    }

    /// `min{2v(a-1), 2v(b)+1, 2v(c)-1, 2v(d-1)}` in `ϖ`-digits, that is the
    /// raw valuation in units of `1/(2e)`. `None` for the identity at
    /// working precision.
    pub(crate) fn raw_level2(&self, g: &GroupElement) -> Result<Option<i64>> {
        let r = &self.ring;
        let one = r.one();
        let entries = [
            (r.sub(g.m.a(), &one), 0i64),
            (g.m.b().clone(), 1),
            (g.m.c().clone(), -1),
            (r.sub(g.m.d(), &one), 0),
        ];
        let cap = 2 * r.varpi_prec() as i64;
        let mut best: Option<i64> = None;
        let mut any_zero_offset: Option<i64> = None;
        for (x, off) in &entries {
            match r.valuation(x) {
                Some(v) => {
                    let l = 2 * v as i64 + off;
                    best = Some(best.map_or(l, |b| b.min(l)));
                }
                None => {
                    let l = cap + off;
                    any_zero_offset = Some(any_zero_offset.map_or(l, |b| b.min(l)));
                }
            }
        }
        match (best, any_zero_offset) {
            (None, _) => Ok(None),
            (Some(b), Some(z)) if b >= z => {
                Err(Error::Indeterminate("valuation not separated from the working precision".into()))
            }
            (Some(b), _) => Ok(Some(b)),
        }
    }

    fn omega_from_level2(&self, level2: i64) -> Q {
        q(level2, 2 * self.tower.e() as i64) - self.shift_c - q(1, 1)
    }

    /// The `p`-valuation `ω` on `H` (`+∞` for the identity at working
    /// precision).
    pub fn omega(&self, g: &GroupElement) -> Result<ExtQ> {
        Ok(match self.raw_level2(g)? {
            None => ExtQ::Infinite,
            Some(l) => ExtQ::Finite(self.omega_from_level2(l)),
        })
    }

    /// True when `g` has the congruence shape of `H^{1/p}`:
    /// `[[1 + pϖO, pO], [pϖO, 1 + pϖO]]`.
    pub fn in_root_group(&self, g: &GroupElement) -> bool {
        let r = &self.ring;
        let e = self.tower.e() as u32;
        let one = r.one();
        let ok = |x: &RElem, need: u32| r.valuation(x).is_none_or(|v| v >= need);
        ok(&r.sub(g.m.a(), &one), e + 1) && ok(g.m.b(), e) && ok(g.m.c(), e + 1) && ok(&r.sub(g.m.d(), &one), e + 1)
    }

    /// `mlog`: the matrix logarithm of a group element.
    pub fn mlog(&self, g: &GroupElement) -> Result<Mat2> {
        mat_log(&self.ring, &g.m)
    }

    /// `mexp`: the matrix exponential of a Lie element.
    pub fn mexp(&self, x: &Mat2) -> Result<GroupElement> {
        Ok(GroupElement { m: mat_exp(&self.ring, x)? })
    }

    pub fn digits(&self, g: &GroupElement) -> MatrixDigits {
        g.m.digits(&self.ring)
    }

    /// Summary of the ordered basis for reports.
    pub fn basis_summary(&self) -> Vec<BasisSummary> {
        self.basis.iter().map(|b| BasisSummary { label: b.label(), omega: b.omega }).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisSummary {
    pub label: String,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub omega: Q,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_tower::build_tower;

    fn q3() -> Arc<FieldTower> {
        build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap()
    }

    #[test]
    fn gl2_q3_omegas() {
        let ctx = build_group_context(GroupCase::Gl2, &q3()).unwrap();
        assert_eq!(ctx.dim(), 4);
        assert_eq!(ctx.omegas(), vec![q(3, 4), q(3, 4), q(5, 4), q(5, 4)]);
    }

    #[test]
    fn gl2_sqrt3_omegas() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![0], vec![1]], None).unwrap();
        let ctx = build_group_context(GroupCase::Gl2, &t).unwrap();
        assert_eq!(
            ctx.omegas(),
            vec![q(5, 8), q(9, 8), q(5, 8), q(9, 8), q(7, 8), q(11, 8), q(7, 8), q(11, 8)]
        );
    }

    #[test]
    fn quaternion_model() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], Some(-1)).unwrap();
        let ctx = build_group_context(GroupCase::Quaternion, &t).unwrap();
        let r = ctx.ring();
        let pi = ctx.pi().unwrap();
        let s = ctx.sqrt_a().unwrap();
        let z = r.zero();
        let sq = Mat2::from_entries(s.clone(), z.clone(), z.clone(), r.neg(s));
        assert_eq!(pi.mul(r, pi), Mat2::identity(r).scale(r, &r.varpi()));
        assert_eq!(pi.mul(r, &sq), sq.mul(r, pi).scale_int(r, -1));
        assert_eq!(ctx.dim(), 4);
        for w in ctx.omegas() {
            assert!(q(1, 2) < w && w < q(3, 2));
        }
    }

    #[test]
    fn omega_examples() {
        let ctx = build_group_context(GroupCase::Gl2, &q3()).unwrap();
        let r = ctx.ring();
        let g = ctx.element(Mat2::from_entries(r.one(), r.from_int(9), r.zero(), r.one()));
        assert_eq!(ctx.omega(&g).unwrap(), ExtQ::Finite(q(3, 4)));
        assert_eq!(ctx.omega(&ctx.identity()).unwrap(), ExtQ::Infinite);
        let h = Mat2::from_entries(r.from_int(27), r.zero(), r.zero(), r.from_int(-27));
        assert_eq!(ctx.omega(&ctx.mexp(&h).unwrap()).unwrap(), ExtQ::Finite(q(5, 4)));
    }
}
