//! Library behind the `loglie` binary: argument definitions, matrix file
//! parsing, command execution and output rendering.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;

use args::Cli;

/// Runs a parsed command line and returns `(stdout text, exit code)`.
///
/// Exit codes: 0 success, 1 a verification or distance check failed,
/// 2 unreadable input or bad flags, 3 a matrix is off its manifold,
/// 4 a solver did not converge.
pub fn execute(cli: &Cli) -> (String, Result<i32, error::CliError>) {
    match commands::run(cli) {
        Ok(out) => {
            let code = if out.passed() { 0 } else { 1 };
            (out.render(cli.common.output), Ok(code))
        }
        Err(e) => (String::new(), Err(e)),
    }
}
