//! Command-line front end for `entwit-core`.

pub mod args;
pub mod commands;
pub mod io;
pub mod verify;

use args::{Cli, Command};
use io::CliResult;

/// What a command produced: the main output, an optional summary for
/// stderr, and the exit code on success.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub body: String,
    pub summary: Option<String>,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let body = match &cli.command {
        Command::Eval(a) => commands::cmd_eval(a, g)?,
        Command::Scan(a) => commands::cmd_scan(a, g)?,
        Command::MaxViolation(a) => commands::cmd_max_violation(a, g)?,
        Command::Distill(a) => commands::cmd_distill(a, g)?,
        Command::Verify => {
            let (json, text, all_match) = verify::cmd_verify(g)?;
            return Ok(Outcome {
                body: json,
                summary: Some(text),
                exit_code: if all_match { 0 } else { 1 },
            });
        }
    };
    Ok(Outcome {
        body,
        summary: None,
        exit_code: 0,
    })
}
