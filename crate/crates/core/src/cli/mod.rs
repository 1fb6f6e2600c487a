//! Command-line front end: figure-reproduction sweeps, population traces
//! and oracle verification, all emitted as CSV.
//!
//! Exit codes: 0 success, 1 validation error, 2 verification breach, 3 I/O error.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Command, Preset, RunConfig, Series, Settings};
use output::{emit, fmt_f64, suffixed, Table};

use crate::kappa::Dynamics;
use crate::multiqubit::{evolve_dense, evolve_w, make_w_state};
use crate::nonmarkov::non_markovianity;
use crate::oracle::{verify_kappa_with, OracleOptions};
use crate::speedlimit::qslt;

/// Tolerance on `max|κ_analytic − κ_oracle|` in `verify`.
pub const KAPPA_TOLERANCE: f64 = 1e-6;
/// Tolerance on the entrywise dense-vs-closed-form difference in `verify`.
pub const DENSE_TOLERANCE: f64 = 1e-12;
/// Oracle comparison points per parameter set in `verify`.
pub const VERIFY_GRID_POINTS: usize = 1000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Breach(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Breach(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ddqsl",
    version,
    about = "Quantum speed limit and non-Markovianity of qubits under dynamical decoupling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// P_t over [0, τ] for one pulse count (columns t,P).
    PopulationTrace(CommonArgs),
    /// τ_QSL versus pulse count at fixed τ.
    QsltSweep(CommonArgs),
    /// Final population P_τ versus pulse count.
    PopulationSweep(CommonArgs),
    /// Non-Markovianity Γ and its two components versus pulse count.
    NonmarkovSweep(CommonArgs),
    /// Cross-check the analytic amplitude against the pseudomode integrator.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Markovian decay rate γ₀.
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Spectral width λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Driving time τ.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Single pulse count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sweep pulse counts 0..=n-max.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Figure preset (fixes all physical parameters).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Output file; multi-trace runs write one file per trace with a suffix.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trace samples per pulse interval.
    #[arg(long)]
    pub grid: Option<usize>,
    /// `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Negative control: integrate the oracle without the pulse sign flips.
    #[arg(long, hide = true)]
    pub inject_wrong_sign: bool,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(base.overlay(Settings {
            gamma0: self.gamma0,
            lambda: self.lambda,
            tau: self.tau,
            n: self.n,
            n_max: self.n_max,
            preset: self.preset,
            out: self.out.clone(),
            grid: self.grid,
        }))
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: CliCommand) -> Result<(), CliError> {
    match command {
        CliCommand::PopulationTrace(a) => {
            let cfg = RunConfig::resolve(Command::PopulationTrace, a.settings()?)?;
            population_trace(&cfg)
        }
        CliCommand::QsltSweep(a) => {
            let cfg = RunConfig::resolve(Command::QsltSweep, a.settings()?)?;
            emit(cfg.out.as_deref(), qslt_sweep(&cfg)?.as_str())
        }
        CliCommand::PopulationSweep(a) => {
            let cfg = RunConfig::resolve(Command::PopulationSweep, a.settings()?)?;
            emit(cfg.out.as_deref(), population_sweep(&cfg)?.as_str())
        }
        CliCommand::NonmarkovSweep(a) => {
            let cfg = RunConfig::resolve(Command::NonmarkovSweep, a.settings()?)?;
            emit(cfg.out.as_deref(), nonmarkov_sweep(&cfg)?.as_str())
        }
        CliCommand::Verify(a) => {
            let settings = a.common.settings()?;
            let cfg = verify_config(settings)?;
            let options = OracleOptions {
                flip_sign: !a.inject_wrong_sign,
                ..OracleOptions::default()
            };
            let report = verify(&cfg, options)?;
            emit(cfg.out.as_deref(), report.table.as_str())?;
            match report.breaches.first() {
                None => Ok(()),
                Some(first) => Err(CliError::Breach(format!(
                    "{} check(s) out of tolerance; first: {first}",
                    report.breaches.len()
                ))),
            }
        }
    }
}

/// Every `(series, n)` pair in row order.
fn points(cfg: &RunConfig) -> Vec<(Series, usize)> {
    cfg.series
        .iter()
        .flat_map(|s| cfg.n_values.iter().map(move |&n| (*s, n)))
        .collect()
}

/// `P_t` sampled `grid` times per interval plus the final time.
pub fn trace_table(series: &Series, n: usize, grid: usize) -> Result<Table, CliError> {
    let schedule = series.schedule(n)?;
    let dynamics = Dynamics::new(series.params, schedule);
    let mut table = Table::new(&["t", "P"]);
    for k in 0..schedule.n_intervals() {
        let start = schedule.interval_start(k);
        let len = schedule.interval_end(k) - start;
        for j in 0..grid {
            let u = len * j as f64 / grid as f64;
            table.row([fmt_f64(start + u), fmt_f64(dynamics.population_in(k, u))]);
        }
    }
    let last = schedule.n_pulses();
    let u = schedule.tau() - schedule.interval_start(last);
    table.row([
        fmt_f64(schedule.tau()),
        fmt_f64(dynamics.population_in(last, u)),
    ]);
    Ok(table)
}

fn population_trace(cfg: &RunConfig) -> Result<(), CliError> {
    let pts = points(cfg);
    let tables = pts
        .par_iter()
        .map(|(s, n)| trace_table(s, *n, cfg.grid))
        .collect::<Result<Vec<_>, _>>()?;
    if tables.len() == 1 {
        return emit(cfg.out.as_deref(), tables[0].as_str());
    }
    match &cfg.out {
        Some(path) => {
            for ((s, n), table) in pts.iter().zip(&tables) {
                let name = suffixed(path, &format!("g{}_n{n}", s.params.gamma0()));
                emit(Some(&name), table.as_str())?;
            }
            Ok(())
        }
        None => {
            let joined: Vec<&str> = tables.iter().map(Table::as_str).collect();
            emit(None, &joined.join("\n"))
        }
    }
}

pub fn qslt_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = points(cfg)
        .par_iter()
        .map(|(s, n)| -> Result<Vec<String>, CliError> {
            let schedule = s.schedule(*n)?;
            let g = fmt_f64(s.params.gamma0());
            Ok(match qslt(&s.params, &schedule) {
                Ok(r) => vec![
                    g,
                    n.to_string(),
                    fmt_f64(r.tau_qsl),
                    fmt_f64(r.ratio),
                    fmt_f64(r.p_tau),
                    fmt_f64(r.gamma_theta0),
                    "ok".into(),
                ],
                Err(crate::Error::DegenerateTarget { p_tau }) => vec![
                    g,
                    n.to_string(),
                    String::new(),
                    String::new(),
                    fmt_f64(p_tau),
                    String::new(),
                    "degenerate-target".into(),
                ],
                Err(e) => return Err(e.into()),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "gamma0",
        "n",
        "tau_qsl",
        "ratio",
        "p_tau",
        "gamma_theta0",
        "status",
    ]);
    rows.into_iter().for_each(|r| table.row(r));
    Ok(table)
}

pub fn population_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = points(cfg)
        .par_iter()
        .map(|(s, n)| -> Result<Vec<String>, CliError> {
            let schedule = s.schedule(*n)?;
            let p_tau = Dynamics::new(s.params, schedule).population(schedule.tau())?;
            Ok(vec![
                fmt_f64(s.params.gamma0()),
                n.to_string(),
                fmt_f64(p_tau),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["gamma0", "n", "p_tau"]);
    rows.into_iter().for_each(|r| table.row(r));
    Ok(table)
}

pub fn nonmarkov_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = points(cfg)
        .par_iter()
        .map(|(s, n)| -> Result<Vec<String>, CliError> {
            let schedule = s.schedule(*n)?;
            let r = non_markovianity(&s.params, &schedule);
            Ok(vec![
                fmt_f64(s.params.gamma0()),
                n.to_string(),
                fmt_f64(r.gamma),
                fmt_f64(r.gamma_theta0),
                fmt_f64(r.gamma_theta_pi4),
                r.optimal.label().into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "gamma0",
        "n",
        "gamma",
        "gamma_theta0",
        "gamma_theta_pi4",
        "optimal",
    ]);
    rows.into_iter().for_each(|r| table.row(r));
    Ok(table)
}

/// Default verification matrix: `γ₀ ∈ {0.2, 5} × n ∈ {0, 5, 10, 20}`, `λ = 1`, `τ = 10`,
/// narrowed by any explicitly given parameters.
pub fn verify_config(settings: Settings) -> Result<RunConfig, CliError> {
    if settings.preset.is_some() {
        return Err(CliError::Validation("verify takes no preset".into()));
    }
    let lambda = settings.lambda.unwrap_or(Preset::LAMBDA);
    let tau = settings.tau.unwrap_or(Preset::LAMBDA_TAU / lambda);
    let gammas = match settings.gamma0 {
        Some(g) => vec![g],
        None => vec![Preset::WEAK_GAMMA0 * lambda, Preset::STRONG_GAMMA0 * lambda],
    };
    let series = gammas
        .into_iter()
        .map(|g| {
            crate::PulseSchedule::new(tau, 0)?;
            Ok(Series {
                params: crate::SpectralParams::new(g, lambda)?,
                tau,
            })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    let n_values = match (settings.n, settings.n_max) {
        (Some(n), _) => vec![n],
        (None, Some(max)) => (0..=max).collect(),
        (None, None) => vec![0, 5, 10, 20],
    };
    Ok(RunConfig {
        command: Command::Verify,
        series,
        n_values,
        grid: settings.grid.unwrap_or(config::DEFAULT_GRID),
        out: settings.out,
        preset: None,
    })
}

pub struct VerifyReport {
    pub table: Table,
    pub breaches: Vec<String>,
}

pub fn verify(cfg: &RunConfig, options: OracleOptions) -> Result<VerifyReport, CliError> {
    let w3 = make_w_state(&[
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.5f64.sqrt(), 0.0),
    ])?;
    let results = points(cfg)
        .par_iter()
        .map(|(s, n)| -> Result<[(String, f64, f64); 2], CliError> {
            let schedule = s.schedule(*n)?;
            let kappa_dev = verify_kappa_with(&s.params, &schedule, VERIFY_GRID_POINTS, options)?;
            let mut dense_dev: f64 = 0.0;
            for t in [0.5 * schedule.tau(), schedule.tau()] {
                let dense = evolve_dense(&w3, t, &s.params, &schedule)?;
                let closed = evolve_w(&w3, t, &s.params, &schedule)?.to_dense()?;
                let worst = (dense - closed)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                dense_dev = dense_dev.max(worst);
            }
            let g = s.params.gamma0();
            Ok([
                (
                    format!("kappa-oracle,{},{n}", fmt_f64(g)),
                    kappa_dev,
                    KAPPA_TOLERANCE,
                ),
                (
                    format!("dense-n3,{},{n}", fmt_f64(g)),
                    dense_dev,
                    DENSE_TOLERANCE,
                ),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&[
        "check",
        "gamma0",
        "n",
        "max_deviation",
        "tolerance",
        "status",
    ]);
    let mut breaches = Vec::new();
    for (label, dev, tol) in results.into_iter().flatten() {
        let pass = dev < tol;
        if !pass {
            breaches.push(format!("{label} deviation {dev:e} >= {tol:e}"));
        }
        table.row([
            label,
            fmt_f64(dev),
            fmt_f64(tol),
            if pass { "pass".into() } else { "fail".into() },
        ]);
    }
    Ok(VerifyReport { table, breaches })
}
