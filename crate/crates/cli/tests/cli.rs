use std::process::{Command, Output};

use padic_casimir_cli::config::{default_corpus, Command as Cmd, RunConfig, TowerEntry};
use padic_casimir_cli::run::run;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-casimir")).args(args).output().unwrap()
}

fn corpus_file(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("padic-casimir-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn malformed_eisenstein_polynomial_is_a_config_error() {
    let path = scratch("bad.toml", "name = \"bad\"\nprime = 3\nunramified_poly = [0, 1]\neisenstein_poly = [[-9], [1]]\n");
    let out = bin(&["decompose", "--tower", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Eisenstein"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_keys_and_bad_parameters_are_config_errors() {
    let path = scratch("typo.toml", "name = \"t\"\nprime = 3\nunramified_poly = [0, 1]\neisenstein_poly = [[-3], [1]]\nquaternion = 1\n");
    assert_eq!(bin(&["decompose", "--tower", &path]).status.code(), Some(2));
    assert_eq!(bin(&["casimir", "--level", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["casimir", "--kind", "x"]).status.code(), Some(2));
    assert_eq!(bin(&["ideal", "--which", "nonsense"]).status.code(), Some(2));
}

#[test]
fn dimension_over_sqrt3_is_two() {
    let out = bin(&["dimension", "--tower", &corpus_file("q3_sqrt3.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "padic-casimir/report/v1");
    assert_eq!(v["records"][0]["measured"]["report"]["krull_dimension"], 2);
    assert_eq!(v["summary"]["passed"], 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["casimir", "--radius", "0", "--radius", "1", "--kind", "z"];
    let (a, b) = (bin(&args), bin(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["group-check", "--samples", "50", "--seed", "9"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}

#[test]
fn ideal_text_round_trips() {
    let out = bin(&["ideal", "--tower", &corpus_file("q3_sqrt3.toml"), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2*e0_0*f0_0  # c_0,3"));
    let entry = TowerEntry::load(std::path::Path::new(&corpus_file("q3_sqrt3.toml"))).unwrap();
    let report = run(&RunConfig::new(Cmd::Ideal, vec![entry])).unwrap();
    assert!(report.all_pass());
    assert_eq!(report.records[0].measured["generators"].as_array().unwrap().len(), 6);
}

#[test]
fn shipped_corpus_runs_every_stage() {
    let corpus = default_corpus();
    assert_eq!(corpus.len(), 5);
    for cmd in [Cmd::Decompose, Cmd::Symbols, Cmd::Casimir, Cmd::Dimension] {
        let report = run(&RunConfig::new(cmd, corpus.clone())).unwrap();
        assert!(report.all_pass(), "{cmd:?}: {}", report.to_json());
    }
}
