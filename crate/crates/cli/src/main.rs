mod args;
mod commands;
mod output;
mod repro;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// Exit code for a finished run.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.json).as_bytes());
            match out.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let dbg = format!("{:?}", e);
            let kind = dbg.split(['(', ' ', '{']).next().unwrap_or("Error");
            eprintln!("error[{}]: {}", kind, e);
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
