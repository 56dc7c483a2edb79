//! Command-line front end: algebra files, reports, DOT and JSON output.

pub mod algfile;
pub mod commands;
pub mod export;

use clap::Parser;

pub use algfile::AlgebraFile;
pub use commands::{Cli, CliError};

/// Parses arguments and runs the command. Returns the exit code with the text
/// for stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (1, String::new(), text) };
        }
    };
    let mut out = String::new();
    match commands::execute(&cli, &mut out) {
        Ok(()) => (0, out, String::new()),
        Err(e) => (e.exit_code(), out, format!("error: {e}\n")),
    }
}
