use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use naimark_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    if !outcome.stdout.is_empty() {
        let written = match &outcome.out {
            Some(path) => std::fs::write(path, &outcome.stdout),
            None => std::io::stdout().write_all(outcome.stdout.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code)
}
