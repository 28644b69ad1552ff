mod args;
mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    let output = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let mut out = io::stdout().lock();
    let lines: Vec<String> = match cli.format {
        Format::Human => output.human.clone(),
        Format::Machine => output.reports.iter().map(|r| r.to_json_line()).collect(),
    };
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return ExitCode::from(INPUT_ERROR);
        }
    }
    ExitCode::from(output.exit_code() as u8)
}
