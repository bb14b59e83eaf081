mod args;
mod commands;
mod format;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<evdmm::Error>() {
        Some(e) if e.is_capacity() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("evdmm: error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        (Err(e), _) => {
            eprintln!("evdmm: error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
        (Ok(_), Err(e)) => {
            eprintln!("evdmm: error: {e}");
            ExitCode::from(2)
        }
    }
}
