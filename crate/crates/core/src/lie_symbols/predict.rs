//! Closed-form principal symbols and their `ε_K`-expansion.

use std::sync::Arc;

use serde::Serialize;

use super::{basis_index, LieData, LieKind};
use crate::error::{Error, Result};
use crate::finite_field::FiniteField;
use crate::polynomial::{Poly, PolyRing};
use crate::pvalued_groups::{GroupCase, GroupContext};
use crate::rational::{q, Q};

fn residue_field(ctx: &GroupContext) -> FiniteField {
    ctx.ring().residue_field().clone()
}

/// `(name, ω)` of each closed-form variable.
fn variables(ctx: &GroupContext) -> Vec<(String, Q)> {
    let (f, e) = (ctx.tower().f(), ctx.tower().e());
    let omega = |kind: char, j: usize| ctx.basis()[basis_index(ctx, kind, 0, j)].omega;
    let mut out = Vec::new();
    match ctx.case() {
        GroupCase::Gl2 => {
            for x in ['e', 'f', 'h', 'z'] {
                for k in 0..f {
                    for j in 0..e {
                        out.push((format!("{x}{k}_{j}"), omega(x, j)));
                    }
                }
            }
        }
        GroupCase::Quaternion => {
            for k in 0..2 * f {
                for j in 0..e {
                    out.push((format!("w{k}_{j}"), omega('a', j)));
                }
            }
            for (x, src) in [('h', 'c'), ('z', 'z')] {
                for k in 0..f {
                    for j in 0..e {
                        out.push((format!("{x}{k}_{j}"), omega(src, j)));
                    }
                }
            }
        }
    }
    out
}

/// Polynomial ring in the closed-form variables, graded by `ω`; this is the
/// ring the Casimir ideal lives in.
pub fn variable_ring(ctx: &GroupContext) -> Arc<PolyRing> {
    let (names, weights): (Vec<String>, Vec<Q>) = variables(ctx).into_iter().unzip();
    PolyRing::new(residue_field(ctx), names, Some(weights))
}

/// The closed-form variables at radius `r_N` (degree `ω / p^N`) and `eps`.
pub fn label_ring(ctx: &GroupContext, radius: u32) -> Arc<PolyRing> {
    let pn = q((ctx.p() as i64).pow(radius), 1);
    let (mut names, mut weights): (Vec<String>, Vec<Q>) = variables(ctx).into_iter().map(|(n, w)| (n, w / pn)).unzip();
    names.push("eps".into());
    weights.push(q(1, ctx.tower().e() as i64));
    PolyRing::new(residue_field(ctx), names, Some(weights))
}

fn named(ring: &Arc<PolyRing>, name: &str) -> Poly {
    Poly::named(ring, name).expect("closed-form variable")
}

/// `μ̄_{j,ρ_k}` in the residue field of the group tower.
fn mu_bar(ctx: &GroupContext, data: &LieData, j: usize, k: usize) -> u32 {
    let field = ctx.ring().residue_field();
    let m = data.decomposition.mu_residues[j];
    let m = match ctx.case() {
        GroupCase::Gl2 => m,
        // f = 1 here, so the residue is rational.
        GroupCase::Quaternion => field.from_int(m as i64),
    };
    field.frobenius(m, k as u32)
}

/// `Σ_j μ̄_j ε_K^{e-1-j+shift} x_{class,j}^{p^N}`.
fn linear_form(
    ctx: &GroupContext,
    data: &LieData,
    ring: &Arc<PolyRing>,
    x: char,
    class: usize,
    k: usize,
    shift: u32,
    n: u32,
) -> Poly {
    let e = ctx.tower().e();
    let pn = (ctx.p() as u64).pow(n) as u32;
    let eps = named(ring, "eps");
    let mut acc = Poly::zero(ring);
    for j in 0..e {
        let v = named(ring, &format!("{x}{class}_{j}")).pow(pn);
        let t = v.mul(&eps.pow((e - 1 - j) as u32 + shift)).scale(mu_bar(ctx, data, j, k));
        acc = acc.add(&t);
    }
    acc
}

fn prediction(ctx: &GroupContext, data: &LieData, kind: LieKind, k: usize, n: u32) -> Result<Poly> {
    data.check_class(k)?;
    let ring = label_ring(ctx, n);
    let f = ctx.tower().f() as i64;
    let kk = k as i64 - n as i64;
    let class = |m: i64| kk.rem_euclid(m) as usize;
    let form = |kind: LieKind| -> Poly {
        match (ctx.case(), kind) {
            (GroupCase::Gl2, LieKind::E) => linear_form(ctx, data, &ring, 'e', class(f), k, 1, n),
            (GroupCase::Gl2, LieKind::F) => linear_form(ctx, data, &ring, 'f', class(f), k, 0, n),
            (GroupCase::Quaternion, LieKind::E) => linear_form(ctx, data, &ring, 'w', class(2 * f), k, 0, n),
            (GroupCase::Quaternion, LieKind::F) => {
                linear_form(ctx, data, &ring, 'w', (kk + f).rem_euclid(2 * f) as usize, k, 1, n)
            }
            // 𝐡 carries a 1/√a, and √a^{p^N} = (-1)^N √a in the residue field.
            (GroupCase::Quaternion, LieKind::H) => linear_form(ctx, data, &ring, 'h', class(f), k, 0, n)
                .scale(ring.field().from_int(if n % 2 == 1 { -1 } else { 1 })),
            (_, LieKind::H) => linear_form(ctx, data, &ring, 'h', class(f), k, 0, n),
            (_, LieKind::Z) => linear_form(ctx, data, &ring, 'z', class(f), k, 0, n),
            (_, LieKind::Delta) => unreachable!(),
        }
    };
    if kind != LieKind::Delta {
        return Ok(form(kind));
    }
    let field = ring.field();
    let half = field.inv(field.from_int(2)).expect("p odd");
    let h = form(LieKind::H);
    let ef = form(LieKind::F).mul(&form(LieKind::E));
    Ok(h.mul(&h).scale(half).add(&ef.scale(field.from_int(2))))
}

/// The closed-form principal symbol of the scaled element of `kind` for the
/// embedding class `k` at radius `r_N`, in [`label_ring`] variables.
pub fn predicted_symbol(ctx: &GroupContext, kind: LieKind, k: usize, n: u32) -> Result<Poly> {
    let data = LieData::new(ctx)?;
    let p = prediction(ctx, &data, kind, k, n)?;
    if !p.is_homogeneous() {
        return Err(Error::SelfCheck(format!("closed form {p} is not homogeneous")));
    }
    Ok(p)
}

/// Rewrite a closed form in the basis-label variables of `target` (a
/// symbol ring of the algebra at the same radius): each closed-form variable
/// is the residue-field combination of basis symbols it abbreviates.
pub fn to_basis_variables(ctx: &GroupContext, poly: &Poly, target: &Arc<PolyRing>) -> Result<Poly> {
    let data = LieData::new(ctx)?;
    let field = target.field().clone();
    let f = ctx.tower().f();
    let beta: Vec<u32> = data
        .decomposition
        .beta
        .iter()
        .map(|b| b.residue().map(|r| if ctx.case() == GroupCase::Quaternion { field.from_int(r as i64) } else { r }))
        .collect::<Result<_>>()?;
    let label = |kind: char, i: usize, j: usize| named(target, &ctx.basis()[basis_index(ctx, kind, i, j)].label());
    let sqrt_inv = ctx.sqrt_a().map(|s| field.inv(ctx.ring().residue(s)).expect("unit"));
    let half = field.inv(field.from_int(2)).expect("p odd");
    let mut images = Vec::with_capacity(poly.ring().nvars());
    for name in poly.ring().names() {
        if name == "eps" {
            images.push(named(target, "eps"));
            continue;
        }
        let x = name.chars().next().unwrap();
        let (k, j) = name[1..].split_once('_').expect("closed-form name");
        let (k, j): (usize, usize) = (k.parse().unwrap(), j.parse().unwrap());
        let mut img = Poly::zero(target);
        for (i, &b) in beta.iter().enumerate().take(f) {
            let fr = |c: u32| field.frobenius(c, k as u32);
            match (ctx.case(), x) {
                (GroupCase::Gl2, _) => img = img.add(&label(x, i, j).scale(fr(b))),
                (GroupCase::Quaternion, 'w') => {
                    let s = sqrt_inv.unwrap();
                    img = img.add(&label('a', i, j).scale(field.mul(half, fr(b))));
                    img = img.add(&label('b', i, j).scale(field.mul(half, fr(field.mul(b, s)))));
                }
                (GroupCase::Quaternion, 'h') => img = img.add(&label('c', i, j).scale(fr(field.mul(b, sqrt_inv.unwrap())))),
                (GroupCase::Quaternion, _) => img = img.add(&label(x, i, j).scale(fr(b))),
            }
        }
        images.push(img);
    }
    Ok(poly.substitute(target, &images))
}

/// `σ(C_N) = Σ_i c_{N,i} ε_K^i`.
#[derive(Clone, Debug, Serialize)]
pub struct EpsKExpansion {
    pub kind: LieKind,
    pub class: usize,
    pub radius: u32,
    /// `c_0, …, c_{d_C}` in [`variable_ring`] variables (raised to `p^N`).
    pub coefficients: Vec<Poly>,
}

/// Coefficients of the closed form as a polynomial in `ε_K`.
pub fn casimir_coefficients(ctx: &GroupContext, kind: LieKind, k: usize, n: u32) -> Result<EpsKExpansion> {
    if !matches!(kind, LieKind::Delta | LieKind::Z) {
        return Err(Error::Config("ε_K-expansions are taken of delta or z".into()));
    }
    let sym = predicted_symbol(ctx, kind, k, n)?;
    let e = ctx.tower().e();
    let d_c = if kind == LieKind::Delta { 2 * e - 1 } else { e - 1 };
    let eps = sym.ring().var_index("eps").unwrap();
    let target = variable_ring(ctx);
    let nv = target.nvars();
    let images: Vec<Poly> = (0..nv).map(|i| Poly::var(&target, i)).chain([Poly::zero(&target)]).collect();
    let by_power = sym.coefficients_in(eps);
    if by_power.keys().any(|&i| i as usize > d_c) {
        return Err(Error::SelfCheck(format!("ε_K-degree of {sym} exceeds {d_c}")));
    }
    let coefficients = (0..=d_c as u32)
        .map(|i| by_power.get(&i).map_or_else(|| Poly::zero(&target), |c| c.substitute(&target, &images)))
        .collect();
    Ok(EpsKExpansion { kind, class: k, radius: n, coefficients })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusLawReport {
    pub kind: LieKind,
    pub class: usize,
    pub step: u32,
    /// `c̄_{N+mf,i}` equals `c̄_{N,i}` with every variable raised to `p^{mf}`.
    pub variables_raised: bool,
    /// `c̄_{N+mf,i}` equals `c̄_{N,i}^{p^{mf}}`.
    pub frobenius_power: bool,
    pub base: Vec<Poly>,
    pub shifted: Vec<Poly>,
    pub passed: bool,
}

/// Compare the expansions at `N = 0` and `N = m·f`.
pub fn frobenius_law(ctx: &GroupContext, kind: LieKind, k: usize, m: u32) -> Result<FrobeniusLawReport> {
    let step = m * ctx.tower().f() as u32;
    let base = casimir_coefficients(ctx, kind, k, 0)?.coefficients;
    let shifted = casimir_coefficients(ctx, kind, k, step)?.coefficients;
    let pk = (ctx.p() as u64).pow(step) as u32;
    let variables_raised = base.iter().zip(&shifted).all(|(b, s)| &b.raise_variables(pk) == s);
    let frobenius_power = base.iter().zip(&shifted).all(|(b, s)| &b.pow(pk) == s);
    Ok(FrobeniusLawReport {
        kind,
        class: k,
        step,
        variables_raised,
        frobenius_power,
        passed: variables_raised && frobenius_power,
        base,
        shifted,
    })
}
