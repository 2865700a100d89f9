//! Krull dimension from leading-term ideals, radical membership, and the
//! randomized dimension checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::groebner::{groebner, GroebnerBasis};
use super::IdealSpec;
use crate::error::Result;
use crate::finite_field::FiniteField;
use crate::polynomial::{Mono, Poly, PolyRing};

/// Largest set of variables containing the support of no monomial in
/// `monomials`, by depth-first search with pruning.
pub fn independent_set_dimension(nvars: usize, monomials: &[Mono]) -> usize {
    let supports: Vec<u64> = monomials.iter().map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i))).collect();
    if supports.contains(&0) {
        // The unit ideal has empty variety.
        return 0;
    }
    fn search(v: usize, n: usize, chosen: u64, size: usize, supports: &[u64], best: &mut usize) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        let with = chosen | (1 << v);
        if supports.iter().all(|&s| s & !with != 0) {
            search(v + 1, n, with, size + 1, supports, best);
        }
        search(v + 1, n, chosen, size, supports, best);
    }
    let mut best = 0;
    search(0, nvars, 0, 0, &supports, &mut best);
    best
}

/// Exhaustive variant of [`independent_set_dimension`] over all subsets.
pub fn brute_force_dimension(nvars: usize, monomials: &[Mono]) -> usize {
    assert!(nvars <= 20, "exhaustive search is for small rings");
    let supports: Vec<u64> = monomials.iter().map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i))).collect();
    if supports.contains(&0) {
        return 0;
    }
    (0u64..1 << nvars)
        .filter(|&s| supports.iter().all(|&m| m & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub ideal: IdealSpec,
    pub groebner_size: usize,
    pub spolys: usize,
    pub variables: usize,
    pub krull_dimension: usize,
    /// `dim H − Kdim`.
    pub grade: usize,
    pub statement: String,
}

pub fn krull_dimension(ideal: &IdealSpec, budget: usize) -> Result<DimensionReport> {
    let gb = ideal.groebner(budget)?;
    Ok(dimension_report(ideal, &gb))
}

pub(crate) fn dimension_report(ideal: &IdealSpec, gb: &GroebnerBasis) -> DimensionReport {
    let n = ideal.ring.nvars();
    let kdim = if gb.is_unit_ideal() { 0 } else { independent_set_dimension(n, &gb.leading_monomials()) };
    DimensionReport {
        ideal: ideal.clone(),
        groebner_size: gb.len(),
        spolys: gb.spolys(),
        variables: n,
        krull_dimension: kdim,
        grade: n - kdim,
        statement: format!(
            "a graded module annihilated by a power of this ideal has Gelfand-Kirillov dimension at most {kdim} (grade at least {})",
            n - kdim
        ),
    }
}

/// `g ∈ √I` iff `1 ∈ I + (1 − t g)` with `t` a new variable.
pub fn in_radical(ideal: &IdealSpec, g: &Poly, budget: usize) -> Result<bool> {
    let ext = ideal.ring.extended(&["radical_t"]);
    let t = Poly::var(&ext, ext.nvars() - 1);
    let mut gens: Vec<Poly> = ideal.generators.iter().map(|p| p.embed(&ext)).collect();
    gens.push(Poly::one(&ext).sub(&t.mul(&g.embed(&ext))));
    Ok(groebner(&ext, &gens, budget)?.is_unit_ideal())
}

/// Whether `√a = √b`.
pub fn radical_equivalence(a: &IdealSpec, b: &IdealSpec, budget: usize) -> Result<bool> {
    for g in &a.generators {
        if !in_radical(b, g, budget)? {
            return Ok(false);
        }
    }
    for g in &b.generators {
        if !in_radical(a, g, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `k[u_0..u_n, v_0..v_n, w_0..w_n]` and the coefficients of
/// `U(X)^2 − λ V(X) W(X) X`, where `U, V, W` carry the unit scalings
/// `a_i, b_i, c_i` on their coefficients.
pub fn lemma_ideal(field: &FiniteField, n: usize, scalings: Option<(&[u32], &[u32], &[u32], u32)>) -> IdealSpec {
    let names: Vec<String> = ["u", "v", "w"].iter().flat_map(|x| (0..=n).map(move |i| format!("{x}{i}"))).collect();
    let ring = PolyRing::new(field.clone(), names, None);
    let var = |k: usize, i: usize| Poly::var(&ring, k * (n + 1) + i);
    let one = vec![1; n + 1];
    let (a, b, c, lambda) = scalings.unwrap_or((&one, &one, &one, 1));
    let mut gens = Vec::new();
    let mut tags = Vec::new();
    for d in 0..=2 * n + 1 {
        let mut g = Poly::zero(&ring);
        for i in 0..=n {
            if d >= i && d - i <= n {
                g = g.add(&var(0, i).mul(&var(0, d - i)).scale(field.mul(a[i], a[d - i])));
            }
            if d > i && d - 1 - i <= n {
                let s = field.mul(lambda, field.mul(b[i], c[d - 1 - i]));
                g = g.sub(&var(1, i).mul(&var(2, d - 1 - i)).scale(s));
            }
        }
        gens.push(g);
        tags.push(format!("X^{d}"));
    }
    IdealSpec { ring, generators: gens, tags }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionLemmaReport {
    pub n: usize,
    pub field_size: u32,
    pub trials: usize,
    pub seed: u64,
    pub generic_dimension: Option<usize>,
    pub specialized_dimensions: Vec<usize>,
    pub worst: usize,
    pub bound: usize,
    pub passed: bool,
}

/// Krull dimension of the lemma ring: the generic ideal for `n ≤ 1`, then
/// `trials` seeded specializations with scalings drawn from `F_q^×`.
pub fn dimension_lemma_check(n: usize, field: &FiniteField, trials: usize, seed: u64, budget: usize) -> Result<DimensionLemmaReport> {
    let generic_dimension = if n <= 1 { Some(krull_dimension(&lemma_ideal(field, n, None), budget)?.krull_dimension) } else { None };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ field.size() as u64);
    let mut specialized_dimensions = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut draw = || (0..=n).map(|_| field.random_nonzero(&mut rng)).collect::<Vec<u32>>();
        let (a, b, c) = (draw(), draw(), draw());
        let lambda = field.random_nonzero(&mut rng);
        let ideal = lemma_ideal(field, n, Some((&a, &b, &c, lambda)));
        specialized_dimensions.push(krull_dimension(&ideal, budget)?.krull_dimension);
    }
    let worst = specialized_dimensions.iter().copied().chain(generic_dimension).max().unwrap_or(0);
    Ok(DimensionLemmaReport {
        n,
        field_size: field.size(),
        trials,
        seed,
        generic_dimension,
        specialized_dimensions,
        worst,
        bound: n + 1,
        passed: worst <= n + 1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialCrossCheck {
    pub ideals: usize,
    pub seed: u64,
    /// `(variables, generators, Gröbner-route dimension, exhaustive dimension)`.
    pub cases: Vec<(usize, Vec<String>, usize, usize)>,
    pub passed: bool,
}

/// Random monomial ideals: dimension through a Gröbner basis against the
/// exhaustive independent-set count on the raw generators.
pub fn monomial_crosscheck(count: usize, seed: u64, budget: usize) -> Result<MonomialCrossCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = FiniteField::prime(3)?;
    let mut cases = Vec::new();
    let mut passed = true;
    for _ in 0..count {
        let nvars = rng.gen_range(2..=7);
        let ngens = rng.gen_range(1..=5);
        let names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
        let ring: Arc<PolyRing> = PolyRing::new(field.clone(), names, None);
        let mut gens = Vec::new();
        let mut monos = Vec::new();
        while gens.len() < ngens {
            let m = Mono((0..nvars).map(|_| if rng.gen_bool(0.35) { rng.gen_range(1..=3) } else { 0 }).collect());
            if m.degree() == 0 {
                continue;
            }
            gens.push(Poly::monomial(&ring, m.clone(), 1));
            monos.push(m);
        }
        let ideal = IdealSpec { ring: ring.clone(), tags: vec![String::new(); gens.len()], generators: gens };
        let via_gb = krull_dimension(&ideal, budget)?.krull_dimension;
        let direct = brute_force_dimension(nvars, &monos);
        passed &= via_gb == direct;
        cases.push((nvars, ideal.generators.iter().map(|g| g.to_string()).collect(), via_gb, direct));
    }
    Ok(MonomialCrossCheck { ideals: count, seed, cases, passed })
}
