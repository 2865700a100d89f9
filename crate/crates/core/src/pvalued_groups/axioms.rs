//! Sampling, the `p`-valuation axiom checks and the Lazard operations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GroupCase, GroupContext, GroupElement, Mat2, MatrixDigits};
use crate::error::{Error, Result};
use crate::rational::{q, ExtQ, Q};

const MAX_WITNESSES: usize = 5;

impl GroupContext {
    /// A random element of `H` with coordinates uniform modulo `p^P`,
    /// occasionally pushed deeper by a factor `p^k`, `k < 3`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        let p = self.p() as u64;
        let modulus = p.pow(self.precision());
        let k = if rng.gen_bool(0.3) { rng.gen_range(1..3) } else { 0 };
        let coords: Vec<u64> = (0..self.dim())
            .map(|_| (rng.gen_range(0..modulus) * p.pow(k)) % modulus)
            .collect();
        self.from_coordinates(&coords)
    }

    /// `ω`, reading an indeterminate value as a lower bound at the
    /// precision floor.
    fn omega_or_floor(&self, g: &GroupElement) -> Result<(ExtQ, bool)> {
        match self.omega(g) {
            Ok(w) => Ok((w, true)),
            Err(Error::Indeterminate(_)) => Ok((ExtQ::Finite(self.precision_floor()), false)),
            Err(e) => Err(e),
        }
    }

    /// The largest `ω` value resolvable at the working precision.
    pub fn precision_floor(&self) -> Q {
        let e = self.tower().e() as i64;
        q(2 * self.ring().varpi_prec() as i64 - 1, 2 * e) - self.shift_constant() - q(1, 1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub x: MatrixDigits,
    pub y: Option<MatrixDigits>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomOutcome {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    /// Cases the working precision could not decide.
    pub undecided: usize,
    pub witnesses: Vec<Witness>,
}

impl AxiomOutcome {
    fn new(name: &str) -> Self {
        AxiomOutcome { name: name.into(), checked: 0, passed: true, undecided: 0, witnesses: Vec::new() }
    }

    fn fail(&mut self, ctx: &GroupContext, x: &GroupElement, y: Option<&GroupElement>, detail: String) {
        self.passed = false;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness { x: ctx.digits(x), y: y.map(|y| ctx.digits(y)), detail });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub case: GroupCase,
    pub field: String,
    pub samples: usize,
    pub seed: u64,
    pub axioms: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

/// `ω(x) ≥ bound` decided at working precision: `Some(verdict)` or
/// `None` when the value sits beyond the precision floor.
fn at_least(w: ExtQ, exact: bool, bound: ExtQ) -> Option<bool> {
    if exact || w >= bound {
        Some(w >= bound)
    } else {
        None
    }
}

pub fn check_p_valuation_axioms(ctx: &GroupContext, n_samples: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ultra = AxiomOutcome::new("omega(xy^-1) >= min(omega x, omega y)");
    let mut comm = AxiomOutcome::new("omega([x,y]) >= omega x + omega y");
    let mut power = AxiomOutcome::new("omega(x^p) = omega(x) + 1");
    let mut ident = AxiomOutcome::new("omega(x) = inf iff x = 1");
    let p = ctx.p() as u64;
    for s in 0..n_samples {
        let x = if s == 0 { ctx.identity() } else { ctx.random_element(&mut rng) };
        let y = ctx.random_element(&mut rng);
        let (wx, ex) = ctx.omega_or_floor(&x)?;
        let (wy, ey) = ctx.omega_or_floor(&y)?;

        let (w, e) = ctx.omega_or_floor(&ctx.mul(&x, &ctx.inverse(&y)))?;
        let bound = wx.min(wy);
        ultra.checked += 1;
        match at_least(w, e && ex && ey, bound) {
            Some(true) => {}
            Some(false) => ultra.fail(ctx, &x, Some(&y), format!("omega(xy^-1) = {w}, min = {bound}")),
            None => ultra.undecided += 1,
        }

        let (w, e) = ctx.omega_or_floor(&ctx.commutator(&x, &y))?;
        let bound = wx.plus(wy);
        comm.checked += 1;
        if !(ex && ey) {
            comm.undecided += 1;
        } else {
            match at_least(w, e, bound) {
                Some(true) => {}
                Some(false) => comm.fail(ctx, &x, Some(&y), format!("omega([x,y]) = {w}, sum = {bound}")),
                None => comm.undecided += 1,
            }
        }

        let (w, e) = ctx.omega_or_floor(&ctx.pow(&x, p))?;
        power.checked += 1;
        let expect = wx.add_q(q(1, 1));
        if ex && e {
            if w != expect {
                power.fail(ctx, &x, None, format!("omega(x^p) = {w}, omega(x) + 1 = {expect}"));
            }
        } else if !ex || expect >= w {
            power.undecided += 1;
        } else {
            power.fail(ctx, &x, None, format!("omega(x^p) undetermined but omega(x) + 1 = {expect}"));
        }

        for z in [&x, &ctx.mul(&y, &ctx.inverse(&y))] {
            ident.checked += 1;
            let is_one = z.m == Mat2::identity(ctx.ring());
            let inf = matches!(ctx.omega(z), Ok(ExtQ::Infinite));
            if is_one != inf {
                ident.fail(ctx, z, None, format!("identity = {is_one}, omega infinite = {inf}"));
            }
        }
    }
    Ok(AxiomReport {
        case: ctx.case(),
        field: ctx.tower().label(),
        samples: n_samples,
        seed,
        axioms: vec![ultra, comm, power, ident],
    })
}

/// `g + h` in the Lazard Lie algebra: `exp(log g + log h)`.
pub fn lazard_add(ctx: &GroupContext, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    let r = ctx.ring();
    ctx.mexp(&ctx.mlog(g)?.add(r, &ctx.mlog(h)?))
}

/// `[g, h]` in the Lazard Lie algebra: `exp([log g, log h])`.
pub fn lazard_bracket(ctx: &GroupContext, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    let r = ctx.ring();
    ctx.mexp(&ctx.mlog(g)?.bracket(r, &ctx.mlog(h)?))
}

/// Stage `n` of the limit formula `(g^{p^n} h^{p^n})^{p^{-n}}`, with the
/// `p`-adic valuation to which it must agree with `lazard_add`.
pub fn lazard_limit_stage(ctx: &GroupContext, g: &GroupElement, h: &GroupElement, n: u32) -> Result<(GroupElement, Q)> {
    let r = ctx.ring();
    let pn = (ctx.p() as u64).pow(n);
    let prod = ctx.mul(&ctx.pow(g, pn), &ctx.pow(h, pn));
    let log = ctx
        .mlog(&prod)?
        .div_p_exact(r, n)
        .ok_or_else(|| Error::Convergence("root extraction left the convergence domain".into()))?;
    let stage = ctx.mexp(&log)?;
    let e = r.e() as i64;
    let vx = ctx.mlog(g)?.valuation(r).map_or(q(r.prec() as i64, 1), |v| q(v as i64, e));
    let vy = ctx.mlog(h)?.valuation(r).map_or(q(r.prec() as i64, 1), |v| q(v as i64, e));
    let cap = q(r.prec() as i64 - 2 * n as i64 - 1, 1);
    Ok((stage, (vx + vy + q(n as i64, 1)).min(cap)))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::padic_tower::build_tower;

    #[test]
    fn lazard_trivial_identities() {
        let t = build_tower(3, &[0, 1], &[vec![-3], vec![1]], None).unwrap();
        let ctx = build_group_context(GroupCase::Gl2, &t).unwrap();
        let g = ctx.basis_element(2);
        let h = ctx.basis_element(3);
        assert_eq!(lazard_add(&ctx, &g, &h).unwrap(), ctx.mul(&g, &h));
        let x = ctx.basis_element(0);
        assert_eq!(lazard_bracket(&ctx, &x, &x).unwrap(), ctx.identity());
    }
}
