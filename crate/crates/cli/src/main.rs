use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use loglie_cli::{args::Cli, execute};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, outcome) = execute(&cli);
    let mut out = std::io::stdout().lock();
    if out.write_all(stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    match outcome {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => {
            eprintln!("error: checks failed");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
