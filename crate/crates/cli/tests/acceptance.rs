//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use padic_casimir_cli::acceptance::{run_all, CRITERIA};

fn main() -> ExitCode {
    let outcomes = run_all(1);
    assert_eq!(outcomes.len(), CRITERIA.len());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
