//! Sparse multivariate polynomials over `F_q` in degree-reverse-lexicographic
//! order, with optional rational variable weights.
//!
//! Text format: sums of terms, `*` for products, `^` for non-negative
//! integer powers, integer coefficients, and parenthesized polynomials in
//! the field generator `t` for non-prime fields, e.g. `2*e0_1^2*h1_0 +
//! (1+t)*z0_0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::FiniteField;
use crate::rational::{q, Q};

/// Exponent vector, ordered by grevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = vec![0; n];
        m[i] = 1;
        Mono(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient(&self, o: &Mono) -> Mono {
        Mono(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            other => return other,
        }
        for (a, b) in self.0.iter().zip(&o.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Serialize)]
pub struct PolyRing {
    #[serde(skip)]
    field: FiniteField,
    names: Vec<String>,
    /// Graded degree of each variable.
    #[serde(serialize_with = "crate::rational::ser_q_vec")]
    weights: Vec<Q>,
}

impl PolyRing {
    pub fn new(field: FiniteField, names: Vec<String>, weights: Option<Vec<Q>>) -> Arc<Self> {
        let weights = weights.unwrap_or_else(|| vec![q(1, 1); names.len()]);
        assert_eq!(weights.len(), names.len());
        Arc::new(PolyRing { field, names, weights })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same ring with extra variables appended (weight 1).
    pub fn extended(&self, extra: &[&str]) -> Arc<Self> {
        let mut names = self.names.clone();
        let mut weights = self.weights.clone();
        for n in extra {
            names.push(n.to_string());
            weights.push(q(1, 1));
        }
        Arc::new(PolyRing { field: self.field.clone(), names, weights })
    }

    pub fn weighted_degree(&self, m: &Mono) -> Q {
        m.0.iter().zip(&self.weights).fold(q(0, 1), |acc, (&e, &w)| acc + w * q(e as i64, 1))
    }
}

#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Mono, u32>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && self.ring.names == o.ring.names && self.ring.field == o.ring.field
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: u32) -> Self {
        Self::monomial(ring, Mono::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Mono::var(ring.nvars(), i), 1)
    }

    pub fn named(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        let i = ring.var_index(name).ok_or_else(|| Error::Config(format!("unknown variable {name}")))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Mono, c: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Mono, u32)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &FiniteField {
        &self.ring.field
    }

    pub fn terms(&self) -> &BTreeMap<Mono, u32> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Mono) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Mono, c: u32) {
        if c == 0 {
            return;
        }
        let f = &self.ring.field;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Leading monomial and coefficient.
    pub fn leading(&self) -> Option<(&Mono, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, &c) in &o.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let f = &self.ring.field;
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        let f = &self.ring.field;
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect() }
    }

    /// `c · m · self`.
    pub fn mul_term(&self, m: &Mono, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        let f = &self.ring.field;
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(n, &a)| (n.mul(m), f.mul(a, c))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let f = &self.ring.field;
        let mut acc: std::collections::HashMap<Mono, u32> = std::collections::HashMap::new();
        for (m, &a) in &self.terms {
            for (n, &b) in &o.terms {
                let e = acc.entry(m.mul(n)).or_insert(0);
                *e = f.add(*e, f.mul(a, b));
            }
        }
        Poly { ring: self.ring.clone(), terms: acc.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replace variable `i` by `images[i]`, a polynomial of `into` over the
    /// same field.
    pub fn substitute(&self, into: &Arc<PolyRing>, images: &[Poly]) -> Poly {
        debug_assert_eq!(images.len(), self.ring.nvars());
        let mut out = Poly::zero(into);
        for (m, &c) in &self.terms {
            let mut t = Poly::constant(into, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(self.ring.field.inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Weighted degrees of the terms, deduplicated and sorted.
    pub fn weighted_degrees(&self) -> Vec<Q> {
        let mut d: Vec<Q> = self.terms.keys().map(|m| self.ring.weighted_degree(m)).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weighted_degrees().len() <= 1
    }

    /// Move to another ring whose variable list extends this one's (or
    /// equals it).
    pub fn embed(&self, into: &Arc<PolyRing>) -> Poly {
        let n = into.nvars();
        let terms = self.terms.iter().map(|(m, &c)| {
            let mut e = m.0.clone();
            e.resize(n, 0);
            (Mono(e), c)
        });
        Poly { ring: into.clone(), terms: terms.collect() }
    }

    /// Substitute `x_i ↦ x_i^k` in every variable.
    pub fn raise_variables(&self, k: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, &c)| (Mono(m.0.iter().map(|e| e * k).collect()), c)).collect(),
        }
    }

    /// Apply a field automorphism (or any additive map) to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(u32) -> u32) -> Poly {
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, &c)| (m.clone(), f(c))))
    }

    /// Collect by powers of variable `v`: `self = Σ_k c_k · x_v^k` with
    /// `c_k` free of `x_v`.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let k = m.0[v];
            let mut e = m.clone();
            e.0[v] = 0;
            out.entry(k).or_insert_with(|| Poly::zero(&self.ring)).add_term(e, c);
        }
        out
    }

    /// Variables occurring in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.support().collect::<Vec<_>>()).collect();
        v.sort();
        v.dedup();
        v
    }

    fn format_mono(&self, m: &Mono) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.ring.names[i].clone() } else { format!("{}^{}", self.ring.names[i], e) })
            .collect();
        parts.join("*")
    }

    pub fn parse(ring: &Arc<PolyRing>, s: &str) -> Result<Poly> {
        let tokens = tokenize(s)?;
        let mut p = Parser { ring, tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Config(format!("trailing input in polynomial {s:?}")));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    /// Terms in decreasing order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = &self.ring.field;
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = self.format_mono(m);
            let coef = field.format(c);
            match (mono.is_empty(), c == 1) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Config(format!("bad number {t}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Config(format!("unexpected character {c:?} in polynomial")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.ring);
        let mut sign = 1;
        if self.peek() == Some(&Tok::Sym('-')) {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some(Tok::Sym('+')) => sign = 1,
                Some(Tok::Sym('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    return Ok(base.pow(n as u32));
                }
                _ => return Err(Error::Config("expected an exponent after ^".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.ring.field();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ring, f.from_int((n % f.characteristic() as u64) as i64)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.ring.var_index(&name) {
                    Ok(Poly::var(self.ring, i))
                } else if name == "t" && f.degree() > 1 {
                    Ok(Poly::constant(self.ring, f.from_coeffs(&[0, 1])))
                } else {
                    Err(Error::Config(format!("unknown variable {name}")))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(Error::Config("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Config(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring3() -> Arc<PolyRing> {
        PolyRing::new(FiniteField::prime(3).unwrap(), vec!["x".into(), "y".into(), "z".into()], None)
    }

    #[test]
    fn grevlex_order() {
        // x > y > z, and among degree-2 monomials x^2 > xy > y^2 > xz > yz > z^2.
        let m = |a, b, c| Mono(vec![a, b, c]);
        let mut v = vec![m(0, 0, 2), m(1, 1, 0), m(0, 1, 1), m(2, 0, 0), m(1, 0, 1), m(0, 2, 0)];
        v.sort();
        assert_eq!(v, vec![m(0, 0, 2), m(0, 1, 1), m(1, 0, 1), m(0, 2, 0), m(1, 1, 0), m(2, 0, 0)]);
    }

    #[test]
    fn parse_and_print() {
        let r = ring3();
        let p = Poly::parse(&r, "2*x^2*y + x - 4 + z*z").unwrap();
        assert_eq!(p.to_string(), "2*x^2*y + z^2 + x + 2");
        assert_eq!(Poly::parse(&r, &p.to_string()).unwrap(), p);
        assert!(Poly::parse(&r, "w").is_err());
        let f9 = PolyRing::new(FiniteField::new(3, &[1, 0, 1]).unwrap(), vec!["x".into()], None);
        let p = Poly::parse(&f9, "(1+t)*x + t^2").unwrap();
        assert_eq!(Poly::parse(&f9, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn weighted_homogeneity() {
        let r = PolyRing::new(FiniteField::prime(3).unwrap(), vec!["a".into(), "b".into()], Some(vec![q(1, 2), q(1, 1)]));
        assert!(Poly::parse(&r, "a^2 + b").unwrap().is_homogeneous());
        assert!(!Poly::parse(&r, "a + b").unwrap().is_homogeneous());
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(u32, u32, u32, u32)>> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..3, 0u32..3), 0..6)
    }

    fn build(r: &Arc<PolyRing>, t: &[(u32, u32, u32, u32)]) -> Poly {
        Poly::from_terms(r, t.iter().map(|&(a, b, c, k)| (Mono(vec![a, b, c]), k)))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let r = ring3();
            let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
