//! Command-line front end for `clarkson-core`.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! with in-memory writers.

mod args;
mod chi;
mod grid;
mod input;
mod output;
mod phi;
mod scan;
mod search;
mod verify;

use std::fmt;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use clarkson_core::TolerancePolicy;

pub use args::{Cli, Command};
pub use grid::parse_grid;

/// Exit code when nothing was violated.
pub const EXIT_OK: i32 = 0;
/// Exit code when at least one violation was found.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "CLARKSON_SEED";

/// A failure that ends the run with [`EXIT_USAGE`].
#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<clarkson_core::Error> for CliError {
    fn from(e: clarkson_core::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let defaults = TolerancePolicy::default();
    let policy = TolerancePolicy::new(
        cli.rel_tol.unwrap_or(defaults.rel_tol()),
        cli.borderline_band.unwrap_or(defaults.borderline_band()),
    )?;
    // Commands write into buffers so they can run inside a worker pool.
    let dispatch = || -> (CliResult<i32>, Vec<u8>, Vec<u8>) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = match &cli.command {
            Command::Verify(a) => verify::run(a, &policy, &mut o),
            Command::Scan(a) => scan::run(a, &policy, &mut o, &mut e),
            Command::Search(a) => search::run(a, &policy, &mut o),
            Command::Phi(a) => phi::run(a, &mut o),
            Command::Chi(a) => chi::run(a, &mut o),
        };
        (code, o, e)
    };
    let (code, o, e) = match cli.threads {
        None => dispatch(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build()
            .map_err(|e| CliError::new(format!("cannot start {n} worker threads: {e}")))?
            .install(dispatch),
    };
    out.write_all(&o)?;
    out.flush()?;
    err.write_all(&e)?;
    code
}
