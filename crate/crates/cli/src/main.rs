use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padic_casimir::lie_symbols::LieKind;
use padic_casimir::{Error, Result};
use padic_casimir_cli::acceptance;
use padic_casimir_cli::config::{default_corpus, parse_rational, Command, IdealChoice, OutputFormat, RunConfig, TowerEntry};
use padic_casimir_cli::report::Report;
use padic_casimir_cli::run::run;

/// Batch verification of Casimir symbols, Casimir ideals and their
/// dimensions over p-adic towers.
#[derive(Parser)]
#[command(name = "padic-casimir", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Idempotent decomposition data of each tower.
    Decompose(Common),
    /// Seeded p-valuation axiom checks and basis saturation.
    GroupCheck(Common),
    /// Certified symbols of the basis elements b_i.
    Symbols(Common),
    /// Computed versus predicted symbols of scaled Lie elements.
    Casimir(Common),
    /// Print the Casimir ideal or a reference ideal.
    Ideal(Common),
    /// Krull dimension of the chosen ideal.
    Dimension(Common),
    /// Run the full acceptance suite.
    VerifyAll(Common),
}

#[derive(Args)]
struct Common {
    /// Tower entry file (repeatable); defaults to the shipped corpus.
    #[arg(long = "tower")]
    towers: Vec<PathBuf>,
    /// Override the group case of every entry: gl2 or quat.
    #[arg(long)]
    case: Option<String>,
    /// Quotient level, e.g. 3 or 5/2.
    #[arg(long)]
    level: Option<String>,
    /// Coefficient precision in uniformizer digits.
    #[arg(long)]
    precision: Option<u32>,
    /// Number of logarithm series terms.
    #[arg(long)]
    terms: Option<usize>,
    /// Radius index N of r_N (repeatable).
    #[arg(long = "radius")]
    radii: Vec<u32>,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// e, f, h, z or delta.
    #[arg(long, default_value = "delta")]
    kind: String,
    /// Embedding class index.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// casimir, unramified or principal-series.
    #[arg(long, default_value = "casimir")]
    which: String,
    /// json or text.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// S-polynomial budget for Gröbner computations.
    #[arg(long)]
    budget: Option<usize>,
}

fn build_config(command: Command, c: Common) -> Result<RunConfig> {
    let entries = if c.towers.is_empty() {
        default_corpus()
    } else {
        c.towers.iter().map(|p| TowerEntry::load(p)).collect::<Result<Vec<_>>>()?
    };
    let mut config = RunConfig::new(command, entries);
    config.case = c.case;
    config.level = c.level.as_deref().map(parse_rational).transpose()?;
    config.precision = c.precision;
    config.terms = c.terms;
    if !c.radii.is_empty() {
        config.radii = c.radii;
    }
    config.samples = c.samples;
    config.seed = c.seed;
    config.kind = LieKind::parse(&c.kind).map_err(|e| Error::Config(e.to_string()))?;
    config.class = c.k;
    config.ideal = IdealChoice::parse(&c.which).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(b) = c.budget {
        config.spoly_budget = b;
    }
    config.format = match c.format.as_str() {
        "json" => OutputFormat::Json,
        "text" => OutputFormat::Text,
        other => return Err(Error::Config(format!("unknown format {other:?}"))),
    };
    config.out = c.out;
    config.validate()?;
    Ok(config)
}

fn render_text(config: &RunConfig, report: &Report) -> String {
    let mut out = String::new();
    for r in &report.records {
        if config.command == Command::Ideal {
            out.push_str(&format!("# {}\n", r.name));
            out.push_str(r.measured["text"].as_str().unwrap_or(""));
            continue;
        }
        let status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(str::to_uppercase)).unwrap_or_default();
        out.push_str(&format!("{status} {}", r.name));
        if let Some(e) = &r.error {
            out.push_str(&format!(": {e}"));
        } else if let Some(w) = &r.witness {
            out.push_str(&format!(": {w}"));
        }
        out.push('\n');
    }
    let s = &report.summary;
    if config.command != Command::Ideal {
        out.push_str(&format!("{} passed, {} failed, {} errors\n", s.passed, s.failed, s.errors));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Decompose(c) => (Command::Decompose, c),
        Sub::GroupCheck(c) => (Command::GroupCheck, c),
        Sub::Symbols(c) => (Command::Symbols, c),
        Sub::Casimir(c) => (Command::Casimir, c),
        Sub::Ideal(c) => (Command::Ideal, c),
        Sub::Dimension(c) => (Command::Dimension, c),
        Sub::VerifyAll(c) => (Command::VerifyAll, c),
    };
    let config = match build_config(command, common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let result = if command == Command::VerifyAll {
        let outcomes = acceptance::run_all(config.seed);
        for o in &outcomes {
            eprintln!("{}", o.line());
        }
        Ok(Report::new(config.clone(), outcomes.iter().map(|o| o.record()).collect()))
    } else {
        run(&config)
    };
    let report = match result {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = match config.format {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Text => render_text(&config, &report),
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for r in report.records.iter().filter(|r| r.witness.is_some() || r.error.is_some()) {
        eprintln!("{}: {}", r.name, r.error.as_deref().or(r.witness.as_deref()).unwrap_or(""));
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
