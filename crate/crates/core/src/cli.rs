//! The `kapitza` command line: `pattern`, `plan`, `fit` and `verify`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a feasibility flag failed, a
//! fit did not converge or a verification check failed, 3 numerical failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::diffraction::{
    intensities_csv, pattern_svg, phases_from_potential, quadrupole_pattern, DiffractionPattern, PatternError,
    PhaseSet,
};
use crate::feasibility::{plan_experiment, FeasibilityError};
use crate::fitting::{
    fit_dipole, fit_quadrupole, polarizabilities, FitError, FitResult, ObservedPattern, PolarizabilityEstimate,
};
use crate::potentials::PotentialModel;
use crate::scenario::{ConfigError, FitFile, FitModel, PatternSource, ScenarioFile};
use crate::verify::{verify, VerifyOptions};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "kapitza", version, about = "Kapitza-Dirac diffraction patterns, feasibility plans and fits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diffraction pattern of a scenario or phase set, as CSV.
    Pattern(RunArgs),
    /// Feasibility report with pass/fail flags.
    Plan(RunArgs),
    /// Fit grating phases to observed peak intensities.
    Fit(RunArgs),
    /// Seeded analytic-vs-oracle and identity checks.
    Verify(RunArgs),
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Truncation tolerance for patterns.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also write an SVG next to the output file.
    #[arg(long)]
    pub plot: bool,
    /// Seed for verify's random phase sets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PatternError> for CliError {
    fn from(e: PatternError) -> Self {
        match e {
            PatternError::InvalidTolerance(_)
            | PatternError::InvalidInteractionTime(_)
            | PatternError::NonFinitePhase { .. }
            | PatternError::InvalidGrid { .. }
            | PatternError::UntiedPhases => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::Model(p) => p.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<FeasibilityError> for CliError {
    fn from(e: FeasibilityError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// What a successful command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: u8,
    /// Data for stdout.
    pub stdout: String,
    /// Diagnostics for stderr.
    pub stderr: String,
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Pattern(a) => cmd_pattern(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn config_path(args: &RunArgs) -> Result<&Path, CliError> {
    let p = args.config.as_deref().ok_or_else(|| CliError::Invalid("--config is required".into()))?;
    if !p.is_file() {
        return Err(CliError::Invalid(format!("config file {} does not exist", p.display())));
    }
    Ok(p)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

/// Write `body` to `--out`, or hand it back for stdout.
fn emit(args: &RunArgs, body: &str, out: &mut Outcome) -> Result<(), CliError> {
    match &args.out {
        Some(path) => {
            write_file(path, body)?;
            out.stderr.push_str(&format!("wrote {}\n", path.display()));
        }
        None => out.stdout.push_str(body),
    }
    Ok(())
}

fn emit_plot(args: &RunArgs, pattern: &DiffractionPattern, title: &str) -> Result<String, CliError> {
    if !args.plot {
        return Ok(String::new());
    }
    let out = args.out.as_ref().ok_or_else(|| CliError::Invalid("--plot needs --out".into()))?;
    let svg = out.with_extension("svg");
    write_file(&svg, &pattern_svg(pattern, title))?;
    Ok(format!("wrote {}\n", svg.display()))
}

fn tolerance(args: &RunArgs) -> f64 {
    args.tolerance.unwrap_or(DEFAULT_TOLERANCE)
}

pub fn cmd_pattern(args: &RunArgs) -> Result<Outcome, CliError> {
    let path = config_path(args)?;
    let (file, base) = ScenarioFile::load(path)?;
    let (phases, title) = match file.pattern_source(base.as_deref())? {
        PatternSource::Phases(p) => (p, String::from("phase set")),
        PatternSource::Physical(s) => {
            let model = PotentialModel::for_species(&s.atom, &s.laser);
            (phases_from_potential(&model, s.interaction_time)?, format!("{} at {:e} m", s.atom.name, s.laser.wavelength))
        }
    };
    let pattern = quadrupole_pattern(&phases, tolerance(args))?;
    let mut out = Outcome { exit_code: 0, stdout: String::new(), stderr: phase_summary(&phases) };
    out.stderr.push_str(&pattern_summary(&pattern));
    emit(args, &intensities_csv(&pattern), &mut out)?;
    out.stderr.push_str(&emit_plot(args, &pattern, &title)?);
    Ok(out)
}

fn phase_summary(p: &PhaseSet) -> String {
    format!(
        "theta0={:?} thetaA2={:?} thetaA4={:?} thetaC4={:?} global_phase={:?}\n",
        p.theta0, p.theta_a2, p.theta_a4, p.theta_c4, p.global_phase
    )
}

fn pattern_summary(p: &DiffractionPattern) -> String {
    let (lo, hi) = p.order_range();
    format!(
        "orders {lo}..{hi} truncation_order={} truncation_residual={:e} total_intensity={:?}\n",
        p.truncation_order,
        p.truncation_residual,
        p.total_intensity()
    )
}

pub fn cmd_plan(args: &RunArgs) -> Result<Outcome, CliError> {
    let path = config_path(args)?;
    let (file, base) = ScenarioFile::load(path)?;
    let s = file.scenario(base.as_deref())?;
    let report = plan_experiment(&s.atom, &s.laser, s.u_target, &s.thresholds)?;
    let mut out = Outcome { exit_code: if report.all_pass() { 0 } else { 2 }, stdout: report.table(), stderr: String::new() };
    if let Some(path) = &args.out {
        write_file(path, &report.to_json())?;
        out.stderr.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct FitReport<'a> {
    model: &'static str,
    observations: String,
    fit: &'a FitResult,
    polarizability: Option<PolarizabilityEstimate>,
}

pub fn cmd_fit(args: &RunArgs) -> Result<Outcome, CliError> {
    let path = config_path(args)?;
    let cfg = FitFile::load(path)?;
    let observed = ObservedPattern::read_csv(&cfg.observations)?;
    let (fit, model) = match cfg.model {
        FitModel::Dipole => (fit_dipole(&observed, cfg.init.theta0)?, "dipole"),
        FitModel::Quadrupole => (fit_quadrupole(&observed, &cfg.init)?, "quadrupole"),
    };
    let polarizability = match &cfg.laser {
        Some(ctx) => Some(polarizabilities(&fit, ctx)?),
        None => None,
    };
    let report = FitReport { model, observations: cfg.observations.display().to_string(), fit: &fit, polarizability };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))? + "\n";

    let mut out = Outcome {
        exit_code: if fit.converged { 0 } else { 2 },
        stdout: String::new(),
        stderr: format!(
            "{model} fit: theta0={:?} thetaA2={:?} thetaC4={:?} residual={:e} converged={} iterations={}\n",
            fit.theta0_hat, fit.theta_a2_hat, fit.theta_c4_hat, fit.residual, fit.converged, fit.iterations
        ),
    };
    for w in &fit.warnings {
        out.stderr.push_str(&format!("warning: {w}\n"));
    }
    emit(args, &json, &mut out)?;
    if args.plot {
        let pattern = quadrupole_pattern(&fit.phases(), tolerance(args))?;
        out.stderr.push_str(&emit_plot(args, &pattern, &format!("{model} fit"))?);
    }
    Ok(out)
}

pub fn cmd_verify(args: &RunArgs) -> Result<Outcome, CliError> {
    let tol = tolerance(args);
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(CliError::Invalid(format!("--tolerance must be in (0, 1e-3], got {tol}")));
    }
    let report = verify(&VerifyOptions { seed: args.seed, tolerance: tol, ..Default::default() });
    let text = report.to_text();
    let mut out = Outcome { exit_code: if report.passed() { 0 } else { 2 }, stdout: text.clone(), stderr: String::new() };
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if args.plot {
        out.stderr.push_str("--plot has no effect for verify\n");
    }
    Ok(out)
}

/// Entry point for the binary: run, print, and map to an exit code.
pub fn main_with(cli: Cli) -> u8 {
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            eprint!("{}", outcome.stderr);
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
