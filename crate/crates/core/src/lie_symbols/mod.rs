//! Scaled Lie generators and Casimir elements of `L ⊗ Lie G` realized in the
//! truncated Iwasawa algebra through `ψ`, their certified principal symbols,
//! and the closed forms they are compared against.
//!
//! Variables of the closed forms are named by role: `e{k}_{j}`, `f{k}_{j}`,
//! `h{k}_{j}`, `z{k}_{j}` for `GL_2` (embedding class `k`, ramification
//! index `j`) and `w{k}_{j}` (`0 ≤ k < 2f`), `h{k}_{j}`, `z{k}_{j}` for the
//! quaternion case. `eps` is the symbol of `ϖ`.

mod predict;
mod realize;

use std::sync::Arc;

use serde::Serialize;

pub use predict::{
    casimir_coefficients, frobenius_law, label_ring, predicted_symbol, to_basis_variables, variable_ring,
    EpsKExpansion, FrobeniusLawReport,
};
pub use realize::{
    casimir_series, compare_symbol, plan_realization, scaled_generator, RealizationOptions, RealizationPlan,
    ScaledLieElement, SymbolComparison,
};

use crate::error::{Error, Result};
use crate::padic_tower::{ramified_idempotent_data, DecompositionData, FieldTower};
use crate::pvalued_groups::GroupContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieKind {
    E,
    F,
    H,
    Z,
    Delta,
}

impl LieKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e" => Ok(LieKind::E),
            "f" => Ok(LieKind::F),
            "h" => Ok(LieKind::H),
            "z" => Ok(LieKind::Z),
            "delta" | "casimir" => Ok(LieKind::Delta),
            other => Err(Error::Config(format!("unknown Lie element kind {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LieKind::E => "e",
            LieKind::F => "f",
            LieKind::H => "h",
            LieKind::Z => "z",
            LieKind::Delta => "delta",
        }
    }

    /// Number of scaled generators multiplied together.
    fn degree(self) -> u32 {
        if self == LieKind::Delta {
            2
        } else {
            1
        }
    }
}

/// Decomposition data needed by both the closed forms and the realization.
pub(crate) struct LieData {
    pub(crate) tower: Arc<FieldTower>,
    pub(crate) decomposition: DecompositionData,
}

impl LieData {
    pub(crate) fn new(ctx: &GroupContext) -> Result<Self> {
        let tower = ctx.tower().clone();
        let decomposition = ramified_idempotent_data(&tower)?;
        Ok(LieData { tower, decomposition })
    }

    pub(crate) fn check_class(&self, k: usize) -> Result<()> {
        let f = self.tower.f();
        if k >= f {
            return Err(Error::Config(format!("embedding class {k} out of range 0..{f}")));
        }
        if f > 1 && self.tower.e() > 1 && !self.tower.rational_eisenstein() {
            return Err(Error::Unsupported(
                "embedding classes beyond the identity need a rational Eisenstein polynomial".into(),
            ));
        }
        Ok(())
    }
}

/// Index of the basis element `(kind, i, j)` in the ordered basis.
pub(crate) fn basis_index(ctx: &GroupContext, kind: char, i: usize, j: usize) -> usize {
    ctx.basis()
        .iter()
        .position(|b| b.kind == kind && b.i == i && b.j == j)
        .expect("basis label")
}

#[cfg(test)]
mod tests;
