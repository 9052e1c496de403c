mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kn_core::Error;

use crate::config::{Cli, RunConfig};

const PARSE: u8 = 1;
const PRECONDITION: u8 = 2;
const VERIFICATION: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::BadConfig(_) | Error::UnknownStrategy { .. } | Error::BadDimension(_) => PARSE,
        Error::NonScalarDefect { .. }
        | Error::NotCohomologous
        | Error::CentralChargeMismatch { .. }
        | Error::BandNotConstant(_)
        | Error::BandViolation { .. }
        | Error::UpperBandViolation(_) => VERIFICATION,
        _ => PRECONDITION,
    }
}

fn emit(doc: &serde_json::Value, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = RunConfig::resolve(&cli.flags).and_then(|cfg| commands::run(cli.command, &cfg));
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.doc, cli.flags.out.as_deref()) {
                eprintln!("kn: cannot write output: {e}");
                return ExitCode::from(PARSE);
            }
            ExitCode::from(if outcome.pass { 0 } else { VERIFICATION })
        }
        Err(e) => {
            eprintln!("kn: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
