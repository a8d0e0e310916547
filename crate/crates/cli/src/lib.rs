//! Command-line front end for `nctorus`.
//!
//! Every subcommand prints one JSON report. Exit status is 0 on success,
//! 1 on a numerical violation and 2 on malformed input.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::{json, Value};

mod args;
mod commands;
pub mod coverage;
mod input;
pub mod suite;

pub use args::{Cli, Command};

/// Why a subcommand did not produce a clean report.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Input(String),
    Numerical { message: String, residual: Option<f64> },
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure::Input(message.into())
    }

    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical { .. } => 1,
        }
    }
}

impl From<nctorus::Error> for Failure {
    fn from(e: nctorus::Error) -> Self {
        use nctorus::Error as E;
        let residual = match &e {
            E::RelationViolation { residual, .. }
            | E::Compatibility { residual, .. }
            | E::BranchDisagreement { residual }
            | E::NotLeftIdeal { residual }
            | E::InvariantViolation { residual, .. } => Some(*residual),
            E::SmallDivisor { modulus, .. } => Some(*modulus),
            E::NotPositive { .. } => None,
            _ => return Failure::Input(e.to_string()),
        };
        Failure::Numerical {
            message: e.to_string(),
            residual,
        }
    }
}

/// A report and the checks it failed, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome {
            report,
            violations: Vec::new(),
        }
    }
}

/// Parses `argv`, runs the subcommand and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return 2;
        }
    };
    let result = pool.install(|| commands::execute(&cli));
    let (report, violations, code) = match result {
        Ok(o) => {
            let code = i32::from(!o.violations.is_empty());
            (Some(o.report), o.violations, code)
        }
        Err(Failure::Input(message)) => {
            let _ = writeln!(err, "error: {message}");
            return 2;
        }
        Err(Failure::Numerical { message, residual }) => {
            (Some(json!({"error": message, "residual": residual})), vec![message], 1)
        }
    };
    if let Some(report) = report {
        let mut text = serde_json::to_string_pretty(&report).expect("reports are serializable");
        text.push('\n');
        let written = match &cli.global.out {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("--out {}: {e}", path.display())),
            None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(message) = written {
            let _ = writeln!(err, "error: {message}");
            return 2;
        }
    }
    for v in &violations {
        let _ = writeln!(err, "violation: {v}");
    }
    code
}

fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(raw) = std::env::var_os("NCTORUS_THREADS") {
        let n = raw
            .to_str()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("NCTORUS_THREADS must be a positive integer, got {raw:?}"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}
