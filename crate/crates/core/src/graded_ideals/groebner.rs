//! Buchberger's algorithm in degree-reverse-lexicographic order.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{Mono, Poly, PolyRing};

/// Default cap on the number of S-polynomials reduced.
pub const DEFAULT_SPOLY_BUDGET: usize = 200_000;

/// A reduced Gröbner basis, sorted by increasing leading monomial.
#[derive(Clone, Debug, Serialize)]
pub struct GroebnerBasis {
    #[serde(skip)]
    ring: Arc<PolyRing>,
    polys: Vec<Poly>,
    spolys: usize,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Number of S-polynomials reduced while computing the basis.
    pub fn spolys(&self) -> usize {
        self.spolys
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.polys.iter().map(|p| p.leading().unwrap().0.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].leading().unwrap().0.degree() == 0
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        normal_form(p, &self.polys)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Full reduction of `p` modulo `basis` (monic leading coefficients).
fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    let ring = p.ring().clone();
    let field = ring.field().clone();
    let mut rem = Poly::zero(&ring);
    let mut cur = p.clone();
    while let Some((m, c)) = cur.leading().map(|(m, c)| (m.clone(), c)) {
        match basis.iter().find(|g| g.leading().unwrap().0.divides(&m)) {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let factor = field.div(c, lc).unwrap();
                cur = cur.sub(&g.mul_term(&lm.quotient(&m), factor));
            }
            None => {
                rem.add_term(m.clone(), c);
                cur.add_term(m, field.neg(c));
            }
        }
    }
    rem
}

fn s_polynomial(a: &Poly, b: &Poly) -> Poly {
    let (la, _) = a.leading().unwrap();
    let (lb, _) = b.leading().unwrap();
    let l = la.lcm(lb);
    a.mul_term(&la.quotient(&l), 1).sub(&b.mul_term(&lb.quotient(&l), 1))
}

/// Reduced Gröbner basis of the ideal generated by `gens`, reducing at most
/// `budget` S-polynomials.
pub fn groebner(ring: &Arc<PolyRing>, gens: &[Poly], budget: usize) -> Result<GroebnerBasis> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    // Pairs keyed by (degree of the lcm, i, j) for a deterministic normal strategy.
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let push_pairs = |pairs: &mut BTreeSet<(u32, usize, usize)>, basis: &[Poly], j: usize| {
        let lj = basis[j].leading().unwrap().0;
        for (i, g) in basis.iter().enumerate().take(j) {
            let li = g.leading().unwrap().0;
            if !li.coprime(lj) {
                pairs.insert((li.lcm(lj).degree(), i, j));
            }
        }
    };
    for j in 0..basis.len() {
        push_pairs(&mut pairs, &basis, j);
    }
    let mut spolys = 0;
    while let Some(pair) = pairs.pop_first() {
        let (_, i, j) = pair;
        let lcm = basis[i].leading().unwrap().0.lcm(basis[j].leading().unwrap().0);
        // Chain criterion: some other leading monomial divides the lcm and
        // both connecting pairs are already handled.
        let pending = |a: usize, b: usize| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let d = basis[a].leading().unwrap().0.lcm(basis[b].leading().unwrap().0).degree();
            pairs.contains(&(d, a, b))
        };
        let redundant = (0..basis.len()).any(|k| {
            k != i && k != j && basis[k].leading().unwrap().0.divides(&lcm) && !pending(i, k) && !pending(j, k)
        });
        if redundant {
            continue;
        }
        spolys += 1;
        if spolys > budget {
            return Err(Error::Budget(format!("Gröbner basis needs more than {budget} S-polynomials")));
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic());
        let n = basis.len() - 1;
        if basis[n].leading().unwrap().0.degree() == 0 {
            return Ok(GroebnerBasis { ring: ring.clone(), polys: vec![Poly::one(ring)], spolys });
        }
        push_pairs(&mut pairs, &basis, n);
    }
    Ok(GroebnerBasis { ring: ring.clone(), polys: interreduce(basis), spolys })
}

fn interreduce(basis: Vec<Poly>) -> Vec<Poly> {
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.leading().unwrap().0;
        let dominated = basis.iter().enumerate().any(|(k, h)| {
            let lh = h.leading().unwrap().0;
            k != i && lh.divides(lg) && (lh != lg || k < i)
        });
        if !dominated {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<Poly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Poly> = minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.clone()).collect();
            let (lm, lc) = minimal[i].leading().map(|(m, c)| (m.clone(), c)).unwrap();
            let tail = minimal[i].sub(&Poly::monomial(minimal[i].ring(), lm.clone(), lc));
            let mut r = normal_form(&tail, &others);
            r.add_term(lm, lc);
            r.monic()
        })
        .collect();
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    reduced
}
