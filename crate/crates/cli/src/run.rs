use padic_casimir::graded_ideals::{casimir_ideal, krull_dimension, reference_ideals, IdealSpec, ReferenceKind};
use padic_casimir::iwasawa_algebra::build_algebra;
use padic_casimir::lie_symbols::{compare_symbol, RealizationOptions};
use padic_casimir::padic_tower::{check_idempotents, ramified_idempotent_data};
use padic_casimir::polynomial::Poly;
use padic_casimir::pvalued_groups::{build_group_context, check_p_valuation_axioms, GroupCase, GroupContext};
use padic_casimir::rational::{format_q, q};
use padic_casimir::Result;
use serde_json::{json, Value};

use crate::acceptance;
use crate::config::{Command, IdealChoice, RunConfig, TowerEntry};
use crate::report::{Record, Report};

/// Execute the configured pipeline. Corpus entries run concurrently;
/// records keep the (name-sorted) entry order.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    if config.command == Command::VerifyAll {
        let records = acceptance::run_all(config.seed).into_iter().map(|o| o.record()).collect();
        return Ok(Report::new(config.clone(), records));
    }
    let mut entries: Vec<&TowerEntry> = config.entries.iter().collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    let per_entry: Vec<Vec<Record>> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run_entry(config, e))).collect();
        handles.into_iter().map(|h| h.join().expect("entry worker panicked")).collect()
    });
    Ok(Report::new(config.clone(), per_entry.into_iter().flatten().collect()))
}

fn run_entry(config: &RunConfig, entry: &TowerEntry) -> Vec<Record> {
    let name = format!("{}/{}", entry.name, command_name(config.command));
    if entry.fields_only && config.command != Command::Decompose {
        return Vec::new();
    }
    if matches!(config.command, Command::Ideal | Command::Dimension) && !reference_applies(config, entry) {
        return Vec::new();
    }
    match entry_records(config, entry, &name) {
        Ok(r) => r,
        Err(e) => vec![Record::error(name, &e)],
    }
}

/// Reference ideals are only defined for some towers; the rest are skipped.
fn reference_applies(config: &RunConfig, entry: &TowerEntry) -> bool {
    let Ok(case) = config.case_of(entry) else { return true };
    let Ok(tower) = entry.build() else { return true };
    match config.ideal {
        IdealChoice::Casimir => true,
        IdealChoice::Reference(ReferenceKind::Unramified) => tower.e() == 1,
        IdealChoice::Reference(ReferenceKind::PrincipalSeries) => case == GroupCase::Gl2,
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Decompose => "decompose",
        Command::GroupCheck => "group-check",
        Command::Symbols => "symbols",
        Command::Casimir => "casimir",
        Command::Ideal => "ideal",
        Command::Dimension => "dimension",
        Command::VerifyAll => "verify-all",
    }
}

fn context(config: &RunConfig, entry: &TowerEntry) -> Result<GroupContext> {
    build_group_context(config.case_of(entry)?, &entry.build()?)
}

fn chosen_ideal(config: &RunConfig, ctx: &GroupContext) -> Result<IdealSpec> {
    match config.ideal {
        IdealChoice::Casimir => casimir_ideal(ctx),
        IdealChoice::Reference(kind) => reference_ideals(ctx, kind),
    }
}

fn entry_records(config: &RunConfig, entry: &TowerEntry, name: &str) -> Result<Vec<Record>> {
    match config.command {
        Command::Decompose => {
            let tower = entry.build()?;
            let data = ramified_idempotent_data(&tower)?;
            let idem = check_idempotents(&tower)?;
            let summary = data.summary(&tower);
            let witness = Some(format!("beta = {:?}", summary.beta));
            Ok(vec![Record::check(name, idem.all_pass(), json!({ "decomposition": summary, "idempotents": idem }), witness)])
        }
        Command::GroupCheck => {
            let ctx = context(config, entry)?;
            let report = check_p_valuation_axioms(&ctx, config.samples, config.seed)?;
            let p = ctx.p() as i64;
            let saturated = ctx.omegas().iter().all(|w| q(1, p - 1) < *w && *w < q(p, p - 1));
            let witness = report
                .axioms
                .iter()
                .find(|a| !a.passed)
                .and_then(|a| a.witnesses.first())
                .map(|w| serde_json::to_string(w).expect("witness serializes"));
            let measured = json!({ "axioms": report, "basis": ctx.basis_summary(), "strictly_saturated": saturated });
            Ok(vec![Record::check(name, report.all_pass() && saturated, measured, witness)])
        }
        Command::Symbols => {
            let ctx = context(config, entry)?;
            let top = *config.radii.iter().max().unwrap();
            let level = config.level.unwrap_or(q(top as i64 + 2, 1));
            let a = build_algebra(&ctx, level, config.precision.unwrap_or(12))?;
            let mut out = Vec::new();
            let mut ok = true;
            let mut witness = None;
            for &n in &config.radii {
                let ring = a.symbol_ring(n);
                for i in 0..ctx.dim() {
                    let (v, s, cert) = a.r_valuation_symbol(&a.basis_b(i), n, None)?;
                    let good = cert.valid && s == Poly::var(&ring, i);
                    if !good && witness.is_none() {
                        witness = Some(format!("{} at radius {n}: {s}", ctx.basis()[i].label()));
                    }
                    ok &= good;
                    out.push(json!({ "label": ctx.basis()[i].label(), "radius": n, "valuation": format_q(v), "symbol": s, "certificate": cert }));
                }
            }
            Ok(vec![Record::check(name, ok, json!({ "algebra": a.summary(), "symbols": out }), witness)])
        }
        Command::Casimir => {
            let ctx = context(config, entry)?;
            let opts = RealizationOptions { level: config.level, precision: config.precision, terms: config.terms };
            let mut out = Vec::new();
            for &n in &config.radii {
                let rec = format!("{name}/{}/k{}/N{n}", config.kind.name(), config.class);
                match compare_symbol(&ctx, config.kind, config.class, n, &opts) {
                    Ok(r) => {
                        let ok = r.matches && r.central != Some(false);
                        let witness = Some(format!("computed {} ; predicted {}", r.computed, r.predicted_in_basis));
                        out.push(Record::check(rec, ok, serde_json::to_value(&r).expect("serializes"), witness));
                    }
                    Err(e) => out.push(Record::error(rec, &e)),
                }
            }
            Ok(out)
        }
        Command::Ideal => {
            let ctx = context(config, entry)?;
            let ideal = chosen_ideal(config, &ctx)?;
            let mut measured = serde_json::to_value(&ideal).expect("serializes");
            measured["text"] = Value::String(ideal.to_text());
            Ok(vec![Record::check(name, true, measured, None)])
        }
        Command::Dimension => {
            let ctx = context(config, entry)?;
            let (e, f) = (ctx.tower().e(), ctx.tower().f());
            let ideal = chosen_ideal(config, &ctx)?;
            let report = krull_dimension(&ideal, config.spoly_budget)?;
            let d = report.krull_dimension;
            let (ok, expectation) = match config.ideal {
                IdealChoice::Casimir => (d <= e * f, format!("at most [K:Q_p] = {}", e * f)),
                IdealChoice::Reference(ReferenceKind::Unramified) => (d == f, format!("exactly f = {f}")),
                IdealChoice::Reference(ReferenceKind::PrincipalSeries) => (d == e * f, format!("exactly e*f = {}", e * f)),
            };
            let witness = Some(format!("Krull dimension {d}, expected {expectation}; ideal:\n{}", ideal.to_text()));
            let measured = json!({ "report": report, "expected": expectation });
            Ok(vec![Record::check(name, ok, measured, witness)])
        }
        Command::VerifyAll => unreachable!(),
    }
}
