use std::process::ExitCode;

use clap::Parser;
use kapitza_dirac::cli::{main_with, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(main_with(cli)),
        Err(e) => {
            let _ = e.print();
            // Usage errors are invalid input; --help and --version are not errors.
            ExitCode::from(if e.use_stderr() { 1 } else { 0 })
        }
    }
}
