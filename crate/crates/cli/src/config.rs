//! Run configuration: tower entries and command parameters.
//!
//! A tower entry is a small key-value file:
//!
//! ```text
//! name = "q3_sqrt3"
//! prime = 3
//! unramified_poly = [0, 1]            # monic, low to high
//! eisenstein_poly = [[-3], [0], [1]]  # each coefficient in the alpha-basis
//! quaternion_a = -1                   # optional
//! case = "gl2"                        # or "quat"
//! fields_only = false                 # optional
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use padic_casimir::graded_ideals::ReferenceKind;
use padic_casimir::lie_symbols::LieKind;
use padic_casimir::padic_tower::{build_tower, FieldTower};
use padic_casimir::pvalued_groups::GroupCase;
use padic_casimir::rational::{q, Q};
use padic_casimir::{Error, Result};
use serde::{Deserialize, Serialize};

const DEFAULT_CORPUS: [(&str, &str); 5] = [
    ("q3.toml", include_str!("../../../corpus/q3.toml")),
    ("q9.toml", include_str!("../../../corpus/q9.toml")),
    ("q3_sqrt3.toml", include_str!("../../../corpus/q3_sqrt3.toml")),
    ("q3_cbrt3.toml", include_str!("../../../corpus/q3_cbrt3.toml")),
    ("quaternion_q3.toml", include_str!("../../../corpus/quaternion_q3.toml")),
];

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TowerEntry {
    pub name: String,
    pub prime: u32,
    pub unramified_poly: Vec<i64>,
    pub eisenstein_poly: Vec<Vec<i64>>,
    #[serde(default)]
    pub quaternion_a: Option<i64>,
    #[serde(default = "default_case")]
    pub case: String,
    #[serde(default)]
    pub fields_only: bool,
}

fn default_case() -> String {
    "gl2".into()
}

impl TowerEntry {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn group_case(&self) -> Result<GroupCase> {
        GroupCase::parse(&self.case)
    }

    pub fn build(&self) -> Result<Arc<FieldTower>> {
        build_tower(self.prime, &self.unramified_poly, &self.eisenstein_poly, self.quaternion_a)
            .map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("{}: {m}", self.name)),
                other => Error::Config(format!("{}: {other}", self.name)),
            })
    }
}

/// The shipped corpus, sorted by entry name.
pub fn default_corpus() -> Vec<TowerEntry> {
    let mut v: Vec<TowerEntry> = DEFAULT_CORPUS
        .iter()
        .map(|(file, text)| TowerEntry::parse(text, file).expect("shipped corpus parses"))
        .collect();
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Decompose,
    GroupCheck,
    Symbols,
    Casimir,
    Ideal,
    Dimension,
    VerifyAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealChoice {
    Casimir,
    Reference(ReferenceKind),
}

impl IdealChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "casimir" => Ok(IdealChoice::Casimir),
            other => ReferenceKind::parse(other).map(IdealChoice::Reference),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub entries: Vec<TowerEntry>,
    /// Overrides the case of every entry.
    pub case: Option<String>,
    #[serde(serialize_with = "ser_opt_q")]
    pub level: Option<Q>,
    pub precision: Option<u32>,
    pub terms: Option<usize>,
    pub radii: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    pub kind: LieKind,
    pub class: usize,
    pub ideal: IdealChoice,
    pub spoly_budget: usize,
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&padic_casimir::rational::format_q(*v)),
        None => s.serialize_none(),
    }
}

/// `"5/2"`, `"3"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Config(format!("expected a rational like 5/2, got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(q(n, d))
}

impl RunConfig {
    pub fn new(command: Command, entries: Vec<TowerEntry>) -> Self {
        RunConfig {
            command,
            entries,
            case: None,
            level: None,
            precision: None,
            terms: None,
            radii: vec![0],
            samples: 500,
            seed: 1,
            kind: LieKind::Delta,
            class: 0,
            ideal: IdealChoice::Casimir,
            spoly_budget: padic_casimir::graded_ideals::DEFAULT_SPOLY_BUDGET,
            format: OutputFormat::Json,
            out: None,
        }
    }

    /// Reject non-positive parameters, unknown cases and towers that do
    /// not build.
    pub fn validate(&self) -> Result<()> {
        if self.level.is_some_and(|l| l <= q(0, 1)) {
            return Err(Error::Config("level must be positive".into()));
        }
        if self.precision == Some(0) || self.terms == Some(0) || self.samples == 0 || self.spoly_budget == 0 {
            return Err(Error::Config("numeric parameters must be positive".into()));
        }
        if self.radii.is_empty() {
            return Err(Error::Config("at least one radius is needed".into()));
        }
        if let Some(c) = &self.case {
            GroupCase::parse(c)?;
        }
        let mut names: Vec<&str> = self.entries.iter().map(|e| e.name.as_str()).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("tower entry names must be distinct".into()));
        }
        for e in &self.entries {
            e.group_case()?;
            e.build()?;
        }
        Ok(())
    }

    pub fn case_of(&self, entry: &TowerEntry) -> Result<GroupCase> {
        GroupCase::parse(self.case.as_deref().unwrap_or(&entry.case))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5/2").unwrap(), q(5, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), q(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn shipped_corpus_builds() {
        let corpus = default_corpus();
        let names: Vec<&str> = corpus.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["q3", "q3_cbrt3", "q3_sqrt3", "q9", "quaternion_q3"]);
        RunConfig::new(Command::Casimir, corpus).validate().unwrap();
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut corpus = default_corpus();
        corpus.push(corpus[0].clone());
        assert!(matches!(RunConfig::new(Command::Decompose, corpus).validate(), Err(Error::Config(_))));
    }

    #[test]
    fn ideal_choices() {
        assert_eq!(IdealChoice::parse("casimir").unwrap(), IdealChoice::Casimir);
        assert_eq!(IdealChoice::parse("principal-series").unwrap(), IdealChoice::Reference(ReferenceKind::PrincipalSeries));
        assert!(IdealChoice::parse("other").is_err());
    }
}
