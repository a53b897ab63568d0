//! Batch front-end behind the `bianchi` binary.
//!
//! Exit codes: 0 success, 2 usage or invalid input, 3 numeric window,
//! 4 nonconvergence, 5 verification failure, 1 i/o.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::{
    automorphy_cases, q1_grid_discrepancy, q1_random_checks, unitarity_deviation, CommandResult,
    Output, Property, Suite, Target, VerifyReport,
};
pub use config::{
    AggregateConfig, RawConfig, RunConfig, SubconvexityConfig, SupnormConfig, VerifyConfig,
};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "bianchi",
    version,
    about = "Eisenstein series, triple products and exponent bounds on Bianchi groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (`key = value` lines, `[section]` headers).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate E(P, it) at the configured points.
    EvalEisenstein,
    /// Run a verification suite and report pass/fail per property.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Produce a sweep table with fitted slopes.
    Sweep {
        #[arg(value_enum)]
        target: Target,
    },
    /// Validate a cusp-form coefficient file and write it back canonically.
    IngestCoefficients,
}

/// Exit code for a module error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OutOfWindow(_) | Error::Pole(_) | Error::SingularPoint(_) => EXIT_WINDOW,
        Error::Nonconvergence(_) | Error::TruncationFailure { .. } => EXIT_NONCONVERGENCE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

fn report_error(stderr: &mut dyn Write, code: &str, message: String, exit_code: i32) -> i32 {
    let r = ErrorReport {
        error: code,
        message,
        exit_code,
    };
    let _ = writeln!(
        stderr,
        "{}",
        serde_json::to_string(&r).expect("error report serializes")
    );
    exit_code
}

fn has_non_finite(text: &str) -> bool {
    text.split(|c: char| c == ',' || c.is_whitespace() || ":[]{}".contains(c))
        .any(|tok| matches!(tok, "NaN" | "inf" | "-inf" | "null"))
}

fn emit(outputs: &[Output], out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for o in outputs {
                std::fs::write(dir.join(&o.name), &o.contents).map_err(io)?;
            }
        }
        None => {
            for o in outputs.iter().filter(|o| o.primary) {
                stdout.write_all(o.contents.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<CommandResult, Error> {
    match &cli.command {
        Command::EvalEisenstein => commands::eval_eisenstein(cfg, cli.format),
        Command::Verify { suite } => commands::verify(cfg, *suite, cli.format),
        Command::Sweep { target } => commands::sweep(cfg, *target, cli.format),
        Command::IngestCoefficients => commands::ingest_coefficients(cfg, cli.format),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            return report_error(
                stderr,
                "usage",
                e.to_string().trim().to_string(),
                EXIT_USAGE,
            )
        }
    };
    let text = match &cli.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => return report_error(stderr, "io", format!("{}: {e}", p.display()), EXIT_IO),
        },
        None => String::new(),
    };
    let cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return report_error(stderr, e.code(), e.to_string(), EXIT_USAGE),
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => return report_error(stderr, "usage", e.to_string(), EXIT_USAGE),
    };
    let result = match pool.install(|| dispatch(&cli, &cfg)) {
        Ok(r) => r,
        Err(e) => return report_error(stderr, e.code(), e.to_string(), exit_code(&e)),
    };
    if let Some(bad) = result.outputs.iter().find(|o| has_non_finite(&o.contents)) {
        return report_error(
            stderr,
            "non-finite",
            format!("{} contains a non-finite value", bad.name),
            EXIT_NONCONVERGENCE,
        );
    }
    if let Err(e) = emit(&result.outputs, cli.out.as_deref(), stdout) {
        return report_error(stderr, e.code(), e.to_string(), exit_code(&e));
    }
    if result.passed {
        EXIT_OK
    } else {
        report_error(
            stderr,
            "verification-failure",
            "one or more checks failed; see the report".into(),
            EXIT_VERIFICATION,
        )
    }
}
