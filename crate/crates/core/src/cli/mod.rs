//! Batch front end: read a JSON job, run it, write a JSON report.
//!
//! Exit codes: 0 when every check in the job passes, 2 when any check
//! fails or cannot be decided, 1 on errors, 64 on bad usage.

mod job;
mod report;
mod run;

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::error::Error;

pub use job::{Command, JobSpec, MapDesc, ModeDesc, Params, TailDesc, DEFAULT_DEPTH, DEFAULT_KMAX, DEFAULT_ORDER};
pub use run::{run_job, JobError, Report, MIN_DIGITS, SCHEMA};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "ultradisc",
    version,
    about = "Linearization discs and Schröder conjugacies over ultrametric fields"
)]
pub struct Cli {
    /// Job file (JSON).
    #[arg(long)]
    pub job: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `params.N`.
    #[arg(long)]
    pub order: Option<usize>,
    /// Overrides `params.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// No summary line on stderr.
    #[arg(long)]
    pub quiet: bool,
}

impl Cli {
    /// Reads the job file and merges the flag overrides.
    pub fn load(&self) -> Result<JobSpec, Error> {
        let text = std::fs::read_to_string(&self.job).map_err(|e| Error::Io(format!("{}: {e}", self.job.display())))?;
        let mut spec = JobSpec::from_json(&text)?;
        if let Some(n) = self.order {
            spec.params.order = Some(n);
        }
        if let Some(s) = self.seed {
            spec.params.seed = Some(s);
        }
        Ok(spec)
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string())),
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_PASS;
            }
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let outcome = cli
        .load()
        .map_err(JobError::from)
        .and_then(|spec| run_job(&spec).map(|r| (spec, r)));
    match outcome {
        Ok((spec, report)) => {
            if let Err(e) = emit(&cli, &report.to_json_string()) {
                eprintln!("ultradisc: {e}");
                return EXIT_ERROR;
            }
            if !cli.quiet {
                let status = if report.passed { "passed" } else { "failed" };
                eprintln!("ultradisc: {} {status}", spec.command.name());
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(err) => {
            let mut text = serde_json::to_string_pretty(&err.to_json()).expect("plain JSON");
            text.push('\n');
            if emit(&cli, &text).is_err() {
                print!("{text}");
            }
            if !cli.quiet {
                eprintln!("ultradisc: {}", err.error);
            }
            EXIT_ERROR
        }
    }
}
