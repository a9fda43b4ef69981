//! Command-line front end for the NOMA slotted-ALOHA model: argument and
//! config-file handling, the five subcommands and their output formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};

pub use commands::{execute, Cli, Command, Report};
pub use config::{Axis, ExperimentConfig, Format, RawConfig, SweepSpec};
pub use error::CliError;
pub use output::{Cell, Table};

/// Resolves the configuration, runs the command and writes the report to
/// `--output` (or `stdout`). Notes go to `stderr` unless the format is text.
pub fn run<O: Write, E: Write>(cli: &Cli, stdout: &mut O, stderr: &mut E) -> Result<(), CliError> {
    let cfg = cli.command.raw_config().resolve()?;
    let report = execute(&cli.command, &cfg)?;
    match &cfg.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            emit(&report, cfg.format, &mut w, stderr)?;
            w.flush()?;
        }
        None => emit(&report, cfg.format, stdout, stderr)?,
    }
    Ok(())
}

fn emit<O: Write, E: Write>(report: &Report, format: Format, out: &mut O, err: &mut E) -> Result<(), CliError> {
    let notes: &mut dyn Write = if format == Format::Text { out } else { err };
    for line in &report.notes {
        writeln!(notes, "{line}")?;
    }
    if format == Format::Text && !report.notes.is_empty() {
        writeln!(out)?;
    }
    report.table.render(format, out)
}

/// Parses `args` (program name first) and runs them, returning what would
/// have been written to stdout and stderr.
pub fn run_args<I, T>(args: I) -> Result<(String, String), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    run(&cli, &mut out, &mut err)?;
    Ok((String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned()))
}
