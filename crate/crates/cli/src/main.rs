//! `pperiod`: period curves, derivative curves, criterion reports,
//! simulations and asymptotic fits as CSV or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{EGrid, Format, RunConfig, Toggle};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "pperiod", version, about = "Period function of p-Laplacian Hamiltonian centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E, T_w, T_theta, rel_disagreement over an energy grid.
    PeriodCurve(CurveArgs),
    /// E, dT_chow_wang, dT_theta, dT_finite_diff over an energy grid.
    DerivativeCurve(CurveArgs),
    /// Every monotonicity criterion with verdict, worst margin and witness.
    Criteria(CriteriaArgs),
    /// Orbit trace (t, u, v, H) and measured against quadrature period.
    Simulate(SimulateArgs),
    /// Small-energy power-law fit and blow-up probe.
    Asymptotics(AsymptoticsArgs),
    /// Monotonicity of T over a rectangle of (p, q), one row per pair.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with any of the settings below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Potential family: model or harmonic.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Frequency of the harmonic preset.
    #[arg(long)]
    omega: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "PPERIOD_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    common: Common,
    /// `<linear|log|geom>:min:max:count`; bounds may be written as multiples of E*, e.g. `0.9E*`.
    #[arg(long)]
    e_grid: Option<EGrid>,
    #[arg(long)]
    theta_nodes: Option<usize>,
    /// Require T to increase along the grid (auto: model family with p ≥ 2).
    #[arg(long, value_enum)]
    monotone: Option<Toggle>,
    /// Largest accepted relative disagreement between routes.
    #[arg(long)]
    max_disagreement: Option<f64>,
}

#[derive(Debug, Args)]
struct CriteriaArgs {
    #[command(flatten)]
    common: Common,
    /// Criteria that must hold, comma separated (e.g. `h-convex,K-decreasing`).
    #[arg(long, value_delimiter = ',')]
    require: Option<Vec<String>>,
    #[arg(long)]
    grid_size: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Energy, absolute or as a multiple of E* (default `0.5E*`).
    #[arg(long)]
    energy: Option<String>,
    #[arg(long)]
    dt_max: Option<f64>,
    #[arg(long)]
    max_disagreement: Option<f64>,
}

#[derive(Debug, Args)]
struct AsymptoticsArgs {
    #[command(flatten)]
    common: Common,
    /// Fit window `lo:hi` (default `1e-8:1e-7`).
    #[arg(long)]
    decade: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// `lo:hi:count`.
    #[arg(long)]
    p_range: Option<config::Range>,
    /// `lo:hi:count`; pairs with q ≤ p are skipped.
    #[arg(long)]
    q_range: Option<config::Range>,
    #[arg(long)]
    e_grid: Option<EGrid>,
    #[arg(long, value_enum)]
    monotone: Option<Toggle>,
}

impl Common {
    fn to_config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: Some(command.to_string()),
            preset: self.preset.clone(),
            p: self.p,
            q: self.q,
            omega: self.omega,
            tol: self.tol,
            output: self.output.clone(),
            format: self.format,
            threads: self.threads,
            ..Default::default()
        }
    }
}

/// The file configuration (if any) overlaid by the flags.
fn resolve(common: &Common, command: &str, flags: RunConfig) -> Result<RunConfig> {
    let base = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = base.command.as_deref() {
        anyhow::ensure!(c == command, "config file is for `{c}`, not `{command}`");
    }
    Ok(base.overlay(common.to_config(command)).overlay(flags))
}

fn run(cli: Cli) -> Result<commands::Outcome> {
    let cfg = match &cli.command {
        Command::PeriodCurve(a) | Command::DerivativeCurve(a) => {
            let name = if matches!(cli.command, Command::PeriodCurve(_)) { "period-curve" } else { "derivative-curve" };
            let flags = RunConfig {
                e_grid: a.e_grid.clone(),
                theta_nodes: a.theta_nodes,
                monotone: a.monotone,
                max_disagreement: a.max_disagreement,
                ..Default::default()
            };
            resolve(&a.common, name, flags)?
        }
        Command::Criteria(a) => {
            let flags = RunConfig { require: a.require.clone(), grid_size: a.grid_size, ..Default::default() };
            resolve(&a.common, "criteria", flags)?
        }
        Command::Simulate(a) => {
            let flags = RunConfig {
                energy: a.energy.clone(),
                dt_max: a.dt_max,
                max_disagreement: a.max_disagreement,
                ..Default::default()
            };
            resolve(&a.common, "simulate", flags)?
        }
        Command::Asymptotics(a) => {
            resolve(&a.common, "asymptotics", RunConfig { decade: a.decade.clone(), ..Default::default() })?
        }
        Command::Sweep(a) => {
            let flags = RunConfig {
                p_range: a.p_range,
                q_range: a.q_range,
                e_grid: a.e_grid.clone(),
                monotone: a.monotone,
                ..Default::default()
            };
            resolve(&a.common, "sweep", flags)?
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        anyhow::ensure!(n > 0, "threads must be positive");
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| match cli.command {
        Command::PeriodCurve(_) => commands::period_curve(&cfg),
        Command::DerivativeCurve(_) => commands::derivative_curve(&cfg),
        Command::Criteria(_) => commands::criteria(&cfg),
        Command::Simulate(_) => commands::simulate(&cfg),
        Command::Asymptotics(_) => commands::asymptotics(&cfg),
        Command::Sweep(_) => commands::sweep(&cfg),
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err.chain().any(|e| e.downcast_ref::<pperiod::Error>().is_some_and(pperiod::Error::is_numerical));
    if numerical {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.failures.is_empty() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
