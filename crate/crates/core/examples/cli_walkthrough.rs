//! The command-line layer driven from code: plan the shipped 5 Angstrom
//! scenario and print the exit code the `kapitza` binary would return.

use std::path::PathBuf;

use kapitza_dirac::cli::{run, Command, RunArgs};

fn main() {
    let config = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/scenarios/plan_5A.toml");
    let outcome = run(&Command::Plan(RunArgs { config: Some(config), ..Default::default() })).expect("valid scenario");
    print!("{}", outcome.stdout);
    println!("exit code {}", outcome.exit_code);
}
