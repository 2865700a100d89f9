pub mod error;
pub mod finite_field;
pub mod int_ring;
pub mod graded_ideals;
pub mod iwasawa_algebra;
pub mod lie_symbols;
pub mod padic_tower;
pub mod polynomial;
pub mod pvalued_groups;
pub mod rational;

pub use error::{Error, Result};
