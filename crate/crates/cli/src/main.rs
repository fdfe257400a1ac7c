use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entwit_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match entwit_cli::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(summary) = &outcome.summary {
        eprint!("{summary}");
    }
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
