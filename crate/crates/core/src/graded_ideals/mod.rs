//! Ideals of the graded ring `k_L[𝐞, 𝐟, 𝐡, 𝐳]` (or `k_L[𝐰, 𝐡, 𝐳]`): the
//! Casimir ideal, the reference ideals it is compared with, Gröbner bases
//! and Krull dimensions.
//!
//! Text format of an ideal: one generator per line in the polynomial
//! format of [`crate::polynomial`], optionally followed by `# tag`; blank
//! lines and lines starting with `#` are ignored.

mod dimension;
mod groebner;

use std::sync::Arc;

use serde::Serialize;

pub use dimension::{
    brute_force_dimension, dimension_lemma_check, in_radical, independent_set_dimension, krull_dimension, lemma_ideal,
    monomial_crosscheck, radical_equivalence, DimensionLemmaReport, DimensionReport, MonomialCrossCheck,
};
pub use groebner::{groebner, GroebnerBasis, DEFAULT_SPOLY_BUDGET};

use crate::error::{Error, Result};
use crate::lie_symbols::{casimir_coefficients, variable_ring, LieKind};
use crate::polynomial::{Poly, PolyRing};
use crate::pvalued_groups::{GroupCase, GroupContext};

#[derive(Clone, Debug, Serialize)]
pub struct IdealSpec {
    #[serde(serialize_with = "ser_ring")]
    pub ring: Arc<PolyRing>,
    pub generators: Vec<Poly>,
    /// Where each generator comes from.
    pub tags: Vec<String>,
}

fn ser_ring<S: serde::Serializer>(r: &Arc<PolyRing>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("ring", 2)?;
    st.serialize_field("field_size", &r.field().size())?;
    st.serialize_field("variables", r.names())?;
    st.end()
}

impl IdealSpec {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Poly>, tags: Vec<String>) -> Result<Self> {
        if generators.len() != tags.len() {
            return Err(Error::Config("one tag per generator".into()));
        }
        if generators.iter().any(|g| g.is_zero()) {
            return Err(Error::Config("ideal generators must be nonzero".into()));
        }
        Ok(IdealSpec { ring: ring.clone(), generators, tags })
    }

    pub fn groebner(&self, budget: usize) -> Result<GroebnerBasis> {
        groebner(&self.ring, &self.generators, budget)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (g, t) in self.generators.iter().zip(&self.tags) {
            out.push_str(&g.to_string());
            if !t.is_empty() {
                out.push_str("  # ");
                out.push_str(t);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_text(ring: &Arc<PolyRing>, text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        let mut tags = Vec::new();
        for line in text.lines() {
            let (body, tag) = match line.split_once('#') {
                Some((b, t)) => (b.trim(), t.trim()),
                None => (line.trim(), ""),
            };
            if body.is_empty() {
                continue;
            }
            generators.push(Poly::parse(ring, body)?);
            tags.push(tag.to_string());
        }
        Self::new(ring, generators, tags)
    }
}

/// The ideal generated by the `ε_K`-coefficients of the Casimir symbols and
/// of the `𝐳`-symbols, over all embedding classes, at radius `r_0`.
pub fn casimir_ideal(ctx: &GroupContext) -> Result<IdealSpec> {
    let ring = variable_ring(ctx);
    let mut generators = Vec::new();
    let mut tags = Vec::new();
    for k in 0..ctx.tower().f() {
        for (kind, name) in [(LieKind::Delta, "c"), (LieKind::Z, "z")] {
            for (i, c) in casimir_coefficients(ctx, kind, k, 0)?.coefficients.into_iter().enumerate() {
                if c.is_zero() {
                    return Err(Error::SelfCheck(format!("coefficient {name}_{{{k},{i}}} vanishes")));
                }
                generators.push(c);
                tags.push(format!("{name}_{k},{i}"));
            }
        }
    }
    IdealSpec::new(&ring, generators, tags)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// `(𝐡_k, 𝐞_k 𝐟_k, 𝐳_k)` for unramified `K`.
    Unramified,
    /// All `𝐞`-, `𝐡`- and `𝐳`-variables.
    PrincipalSeries,
}

impl ReferenceKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unramified" => Ok(ReferenceKind::Unramified),
            "principal_series" | "principal-series" => Ok(ReferenceKind::PrincipalSeries),
            other => Err(Error::Config(format!("unknown reference ideal {other:?}"))),
        }
    }
}

pub fn reference_ideals(ctx: &GroupContext, which: ReferenceKind) -> Result<IdealSpec> {
    let ring = variable_ring(ctx);
    let (f, e) = (ctx.tower().f(), ctx.tower().e());
    let v = |name: String| Poly::named(&ring, &name);
    let mut generators = Vec::new();
    let mut tags = Vec::new();
    match which {
        ReferenceKind::Unramified => {
            if e != 1 {
                return Err(Error::Config(format!("the unramified reference ideal needs e = 1, not {e}")));
            }
            for k in 0..f {
                let product = match ctx.case() {
                    GroupCase::Gl2 => v(format!("e{k}_0"))?.mul(&v(format!("f{k}_0"))?),
                    GroupCase::Quaternion => v(format!("w{k}_0"))?.mul(&v(format!("w{}_0", k + f))?),
                };
                for (g, t) in [(v(format!("h{k}_0"))?, "h"), (product, "ef"), (v(format!("z{k}_0"))?, "z")] {
                    generators.push(g);
                    tags.push(format!("{t}_{k}"));
                }
            }
        }
        ReferenceKind::PrincipalSeries => {
            if ctx.case() != GroupCase::Gl2 {
                return Err(Error::Config("the principal-series ideal is defined for GL2".into()));
            }
            for x in ['e', 'h', 'z'] {
                for k in 0..f {
                    for j in 0..e {
                        let name = format!("{x}{k}_{j}");
                        generators.push(v(name.clone())?);
                        tags.push(name);
                    }
                }
            }
        }
    }
    IdealSpec::new(&ring, generators, tags)
}

#[cfg(test)]
mod tests;
