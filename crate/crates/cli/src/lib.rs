//! File formats, reports and the command-line driver for `ortho-lift`.

pub mod commands;
pub mod io;
pub mod report;

use std::io::Write;

use clap::Parser;

pub use commands::{run, Cli};
pub use report::{Outcome, Tolerances};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `args`, runs the command, writes the report and returns the exit
/// code. Usage and input errors give 2, failed checks 1.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = Tolerances::from_env().and_then(|tol| run(&cli, &tol));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let text = outcome.render();
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if outcome.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}
