//! Library side of the `deloc` command-line tool: argument definitions, gate
//! files, report types and the deterministic JSON printer.
//!
//! Exit codes: 0 success, 1 unparseable input, 2 invariant violation,
//! 3 Class 2 gate, 4 failed verification.

pub mod args;
pub mod commands;
pub mod error;
pub mod gatefile;
pub mod json;
pub mod report;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::CliError;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("deloc: error: {e}");
            e.exit_code()
        }
    }
}
