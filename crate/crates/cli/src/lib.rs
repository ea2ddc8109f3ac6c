//! Driver behind the `hcs` binary.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! configuration or input errors, 3 for numerical failures.

pub mod checks;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use hcs_core::hydrogen::{evolve_hydrogen, hydrogen_cs, hydrogen_stability_residual};
use hcs_core::position::{export_density_grid, fmt_f64, write_csv, DensityRow, DENSITY_HEADER};
use hcs_core::Error;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::checks::{run_all, Outcome};
use crate::config::{Overrides, RunConfig};

/// Residual bound for the evolution identity.
pub const STABILITY_BOUND: f64 = 5e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    CheckFailed = 1,
    Config = 2,
    Numerical = 3,
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: ExitCode::Config, message: message.into() }
    }
}

pub fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::Domain(_) | Error::Config(_) | Error::Io { .. } | Error::Parse { .. } => ExitCode::Config,
        Error::Truncation { .. } | Error::Numerical(_) | Error::Singularity(_) => ExitCode::Numerical,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: exit_code_for(&e), message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hcs", version, about = "Hydrogen-atom coherent states: checks and data exports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the invariant suite and write a JSON report
    Verify(Overrides),
    /// Sample the coherent-state wavefunction on a grid (CSV)
    Eval(Overrides),
    /// Stability residuals and autocorrelation over time (CSV)
    Evolve(Overrides),
    /// Validate a weight family's moments (JSON)
    Moments(Overrides),
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::Config as i32 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.code as i32;
    }
    match run(&cli.command) {
        Ok(code) => code as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.code as i32
        }
    }
}

/// Caps the worker pool at `HCS_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HCS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("HCS_THREADS must be a positive integer, got '{raw}'")))?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(command: &Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Verify(o) => run_verify(&RunConfig::resolve(o)?),
        Command::Eval(o) => run_eval(&RunConfig::resolve(o)?),
        Command::Evolve(o) => run_evolve(&RunConfig::resolve(o)?),
        Command::Moments(o) => run_moments(&RunConfig::resolve(o)?),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| Error::Io { path: path.to_path_buf(), source }.into()),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::config(format!("cannot write to stdout: {e}"))),
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report types serialize");
    bytes.push(b'\n');
    bytes
}

#[derive(Serialize)]
pub struct VerifyReport<'a> {
    pub command: &'static str,
    pub family: &'a str,
    pub n_max: usize,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<Outcome>,
}

pub fn run_verify(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let results = run_all(cfg);
    let mut code = ExitCode::Pass;
    let mut checks = Vec::new();
    for r in results {
        if let Some(e) = &r.error {
            eprintln!("error: {e}");
            code = worse(code, exit_code_for(e));
        }
        checks.extend(r.outcomes);
    }
    for c in checks.iter().filter(|c| !c.pass) {
        let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
        eprintln!("FAIL {}: measured {} vs bound {}{detail}", c.name, c.measured, c.bound);
        code = worse(code, ExitCode::CheckFailed);
    }
    let report = VerifyReport {
        command: "verify",
        family: cfg.family.name(),
        n_max: cfg.n_max,
        seed: cfg.seed,
        samples: cfg.samples,
        passed: checks.iter().all(|c| c.pass),
        checks,
    };
    emit(cfg.out.as_deref(), &json_bytes(&report))?;
    Ok(code)
}

/// Configuration problems outrank numerical ones, which outrank failed checks.
fn worse(a: ExitCode, b: ExitCode) -> ExitCode {
    let rank = |c: ExitCode| match c {
        ExitCode::Pass => 0,
        ExitCode::CheckFailed => 1,
        ExitCode::Numerical => 2,
        ExitCode::Config => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

pub fn run_eval(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let state = hydrogen_cs(&cfg.label, &cfg.family, cfg.n_max)?;
    let times = cfg.times.clone().unwrap_or_else(|| vec![0.0]);
    let rows = export_density_grid(&state, cfg.omega, &cfg.grid, &times)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, DENSITY_HEADER, rows.iter().map(DensityRow::fields))
        .map_err(|e| CliError::config(format!("csv: {e}")))?;
    emit(cfg.out.as_deref(), &buf)?;
    Ok(ExitCode::Pass)
}

pub const EVOLVE_HEADER: [&str; 4] = ["t", "residual", "re_autocorr", "im_autocorr"];

/// For each time: the stability residual and `⟨ψ(0)|ψ(t)⟩`.
pub fn run_evolve(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let state = hydrogen_cs(&cfg.label, &cfg.family, cfg.n_max)?;
    let times = cfg.times.clone().unwrap_or_else(|| (0..=10).map(f64::from).collect());
    let mut rows = Vec::with_capacity(times.len());
    let mut worst: f64 = 0.0;
    for &t in &times {
        let residual = hydrogen_stability_residual(&cfg.label, &cfg.family, cfg.omega, t, cfg.n_max)?;
        let evolved = evolve_hydrogen(&state, cfg.omega, t);
        let auto: Complex64 = state.coeffs().iter().zip(evolved.coeffs()).map(|(a, b)| a.conj() * b).sum();
        worst = worst.max(residual);
        rows.push([t, residual, auto.re, auto.im]);
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, EVOLVE_HEADER, rows).map_err(|e| CliError::config(format!("csv: {e}")))?;
    emit(cfg.out.as_deref(), &buf)?;
    if worst > STABILITY_BOUND {
        eprintln!("FAIL stability: residual {} exceeds {}", fmt_f64(worst), STABILITY_BOUND);
        return Ok(ExitCode::CheckFailed);
    }
    Ok(ExitCode::Pass)
}

#[derive(Serialize)]
struct MomentsReport<'a> {
    command: &'static str,
    seed: u64,
    passed: bool,
    #[serde(flatten)]
    report: &'a hcs_core::weights::ValidationReport,
}

pub fn run_moments(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let report = cfg.family.validate(cfg.n_max, cfg.tol);
    let passed = report.all_passed();
    for c in report.failed() {
        eprintln!("FAIL family.{}: max deviation {} vs bound {}", c.name, c.max_deviation, c.bound);
    }
    let wrapped = MomentsReport { command: "moments", seed: cfg.seed, passed, report: &report };
    emit(cfg.out.as_deref(), &json_bytes(&wrapped))?;
    Ok(if passed { ExitCode::Pass } else { ExitCode::CheckFailed })
}
