use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use pperiod::asymptotics::asymptotic_report;
use pperiod::criteria::{
    chicone_report, chow_wang_report, discriminant_report, f_nonneg_scan, h_convex_report, inv_hprime2_report,
    k_monotonicity_report, Criterion, CriterionReport,
};
use pperiod::dynamics::simulate_orbit;
use pperiod::period::{dperiod_chow_wang, dperiod_theta, period_direct, period_theta};
use pperiod::potentials::check_hypotheses;
use pperiod::{Error, PotentialSpec};

use crate::config::{positive, Format, Level, RunConfig, Toggle};

const DEFAULT_CURVE_GRID: &str = "log:1e-6E*:0.95E*:40";
const DEFAULT_DERIVATIVE_GRID: &str = "linear:0.05E*:0.9E*:20";
const DEFAULT_SWEEP_GRID: &str = "log:1e-6E*:0.99E*:40";
const DEFAULT_PERIOD_AGREEMENT: f64 = 1e-8;
const DEFAULT_DERIVATIVE_AGREEMENT: f64 = 1e-4;
const DEFAULT_ODE_AGREEMENT: f64 = 1e-5;
const DEFAULT_GRID_SIZE: usize = 400;
const EXPONENT_TOL: f64 = 1e-3;
const COEFF_TOL: f64 = 1e-2;

/// Names of the checks that failed; empty means exit 0.
#[derive(Debug, Default)]
pub struct Outcome {
    pub failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(cfg: &RunConfig, default: Format, header: &[&str], rows: &[T]) -> Result<()> {
    let mut out = sink(cfg)?;
    match cfg.format(default) {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            w.write_record(header)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<()> {
    if cfg.format == Some(Format::Csv) {
        bail!("this command only writes JSON");
    }
    let mut out = sink(cfg)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn monotone_expected(toggle: Toggle, pot: &PotentialSpec) -> bool {
    match toggle {
        Toggle::On => true,
        Toggle::Off => false,
        Toggle::Auto => pot.is_model().is_some_and(|(p, _)| p >= 2.0),
    }
}

fn optional<T>(r: pperiod::Result<T>) -> pperiod::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UnsupportedRoute(_)) | Err(Error::MissingDerivative(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[derive(Debug, Serialize)]
struct PeriodRow {
    #[serde(rename = "E")]
    e: f64,
    #[serde(rename = "T_w")]
    t_w: f64,
    #[serde(rename = "T_theta")]
    t_theta: Option<f64>,
    rel_disagreement: Option<f64>,
}

pub fn period_curve(cfg: &RunConfig) -> Result<Outcome> {
    let pot = cfg.potential()?;
    let es = cfg.e_grid(DEFAULT_CURVE_GRID)?.energies(pot.e_star())?;
    let (tol, nodes) = (cfg.tol()?, cfg.theta_nodes()?);
    let limit = positive("max-disagreement", cfg.max_disagreement.unwrap_or(DEFAULT_PERIOD_AGREEMENT))?;
    let rows = es
        .par_iter()
        .map(|&e| -> pperiod::Result<PeriodRow> {
            let t_w = period_direct(&pot, e, tol)?.t;
            let t_theta = optional(period_theta(&pot, e, nodes))?.map(|s| s.t);
            Ok(PeriodRow { e, t_w, t_theta, rel_disagreement: t_theta.map(|t| rel(t, t_w)) })
        })
        .collect::<pperiod::Result<Vec<_>>>()?;
    emit(cfg, Format::Csv, &["E", "T_w", "T_theta", "rel_disagreement"], &rows)?;

    let mut out = Outcome::default();
    for (i, r) in rows.iter().enumerate() {
        if let Some(d) = r.rel_disagreement {
            out.check(d <= limit, || format!("row {} (E = {:e}): rel_disagreement {d:.3e} > {limit:e}", i + 1, r.e));
        }
    }
    if monotone_expected(cfg.monotone.unwrap_or(Toggle::Auto), &pot) {
        for (i, w) in rows.windows(2).enumerate() {
            out.check(w[1].t_w > w[0].t_w, || {
                format!("row {} (E = {:e}): T_w = {} does not exceed the previous row", i + 2, w[1].e, w[1].t_w)
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct DerivativeRow {
    #[serde(rename = "E")]
    e: f64,
    #[serde(rename = "dT_chow_wang")]
    chow_wang: Option<f64>,
    #[serde(rename = "dT_theta")]
    theta: Option<f64>,
    #[serde(rename = "dT_finite_diff")]
    finite_diff: f64,
}

pub fn derivative_curve(cfg: &RunConfig) -> Result<Outcome> {
    let pot = cfg.potential()?;
    let e_star = pot.e_star();
    let es = cfg.e_grid(DEFAULT_DERIVATIVE_GRID)?.energies(e_star)?;
    let (tol, nodes) = (cfg.tol()?, cfg.theta_nodes()?);
    let limit = positive("max-disagreement", cfg.max_disagreement.unwrap_or(DEFAULT_DERIVATIVE_AGREEMENT))?;
    let rows = es
        .par_iter()
        .map(|&e| -> pperiod::Result<DerivativeRow> {
            let h = 1e-4 * e.min(e_star - e);
            let fd = (period_direct(&pot, e + h, tol)?.t - period_direct(&pot, e - h, tol)?.t) / (2.0 * h);
            Ok(DerivativeRow {
                e,
                chow_wang: optional(dperiod_chow_wang(&pot, e, tol))?.and_then(|s| s.dt_de),
                theta: optional(dperiod_theta(&pot, e, nodes))?.and_then(|s| s.dt_de),
                finite_diff: fd,
            })
        })
        .collect::<pperiod::Result<Vec<_>>>()?;
    emit(cfg, Format::Csv, &["E", "dT_chow_wang", "dT_theta", "dT_finite_diff"], &rows)?;

    let mut out = Outcome::default();
    for (i, r) in rows.iter().enumerate() {
        for (name, v) in [("dT_chow_wang", r.chow_wang), ("dT_theta", r.theta)] {
            if let Some(v) = v {
                let d = rel(v, r.finite_diff);
                out.check(d <= limit, || format!("row {} (E = {:e}): {name} off finite difference by {d:.3e}", i + 1, r.e));
            }
        }
    }
    Ok(out)
}

fn run_criterion(pot: &PotentialSpec, c: Criterion, n: usize) -> pperiod::Result<CriterionReport> {
    Ok(match c {
        Criterion::ChowWangR => chow_wang_report(pot, n),
        Criterion::ChiconeConvexity => chicone_report(pot, n),
        Criterion::KDecreasing => k_monotonicity_report(pot, pot.e_star() * (1.0 - 1e-9), n)?,
        Criterion::HConvex => h_convex_report(pot, n),
        Criterion::InvHprime2Convex => inv_hprime2_report(pot, n),
        Criterion::FNonneg => match pot.is_model() {
            Some((p, q)) => f_nonneg_scan(1.0 / p, q / p, n.max(1000)),
            None => CriterionReport::inconclusive(c, "defined for the model family only"),
        },
        Criterion::Discriminant => discriminant_report(50),
    })
}

#[derive(Debug, Serialize)]
struct CriteriaDocument {
    potential: String,
    hypotheses: pperiod::potentials::HypothesisReport,
    criteria: Vec<CriterionReport>,
}

#[derive(Debug, Serialize)]
struct CriterionRow<'a> {
    criterion: &'a str,
    verdict: String,
    worst_margin: f64,
    witness: String,
    samples: usize,
    note: &'a str,
}

pub fn criteria(cfg: &RunConfig) -> Result<Outcome> {
    let pot = cfg.potential()?;
    let required = cfg
        .require
        .iter()
        .flatten()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| Criterion::from_tag(s.trim()).with_context(|| format!("unknown criterion {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    let n = cfg.grid_size.unwrap_or(DEFAULT_GRID_SIZE);
    if n < 10 {
        bail!("grid-size must be at least 10, got {n}");
    }
    let reports = Criterion::ALL
        .par_iter()
        .map(|&c| run_criterion(&pot, c, n))
        .collect::<pperiod::Result<Vec<_>>>()?;
    let doc = CriteriaDocument { potential: pot.describe(), hypotheses: check_hypotheses(&pot, n), criteria: reports };
    match cfg.format(Format::Json) {
        Format::Json => emit_json(cfg, &doc)?,
        Format::Csv => {
            let rows: Vec<CriterionRow> = doc
                .criteria
                .iter()
                .map(|r| CriterionRow {
                    criterion: r.criterion.tag(),
                    verdict: r.verdict.to_string(),
                    worst_margin: r.worst_margin,
                    witness: serde_json::to_string(&r.witness).unwrap_or_default(),
                    samples: r.samples,
                    note: r.note.as_deref().unwrap_or(""),
                })
                .collect();
            emit(cfg, Format::Csv, &["criterion", "verdict", "worst_margin", "witness", "samples", "note"], &rows)?;
        }
    }
    let mut out = Outcome::default();
    for c in required {
        let r = doc.criteria.iter().find(|r| r.criterion == c).expect("every criterion is evaluated");
        out.check(r.holds(), || format!("criterion {c}: {} (worst margin {:e})", r.verdict, r.worst_margin));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SimulationSummary {
    #[serde(rename = "E")]
    e: f64,
    period_measured: f64,
    period_quadrature: f64,
    rel_disagreement: f64,
    half_period: f64,
    max_drift: f64,
    states: usize,
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome> {
    let pot = cfg.potential()?;
    let level: Level = cfg.energy.as_deref().unwrap_or("0.5E*").parse()?;
    let e = level.resolve(pot.e_star());
    let tol = cfg.tol()?;
    let dt_max = positive("dt-max", cfg.dt_max.unwrap_or(0.1))?;
    let limit = positive("max-disagreement", cfg.max_disagreement.unwrap_or(DEFAULT_ODE_AGREEMENT))?;
    if cfg.format == Some(Format::Json) {
        bail!("the orbit trace is written as CSV");
    }
    let orbit = simulate_orbit(&pot, e, dt_max, tol)?;
    let t_quad = period_direct(&pot, e, tol.min(1e-12))?.t;
    let mut out = sink(cfg)?;
    orbit.trace.write_csv(&pot, &mut out)?;
    out.flush()?;
    let summary = SimulationSummary {
        e,
        period_measured: orbit.period,
        period_quadrature: t_quad,
        rel_disagreement: rel(orbit.period, t_quad),
        half_period: orbit.half_period,
        max_drift: orbit.trace.max_drift,
        states: orbit.trace.states.len(),
    };
    let text = serde_json::to_string_pretty(&summary)?;
    if cfg.output.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    let mut outcome = Outcome::default();
    outcome.check(summary.rel_disagreement <= limit, || {
        format!("E = {e:e}: measured period {} vs quadrature {t_quad} (rel {:.3e})", orbit.period, summary.rel_disagreement)
    });
    Ok(outcome)
}

fn parse_window(s: &str) -> Result<(Level, Level)> {
    let Some((lo, hi)) = s.split_once(':') else {
        bail!("energy window {s:?} is not lo:hi");
    };
    Ok((lo.parse()?, hi.parse()?))
}

pub fn asymptotics(cfg: &RunConfig) -> Result<Outcome> {
    let pot = cfg.potential()?;
    let (lo, hi) = match cfg.decade.as_deref() {
        Some(w) => parse_window(w)?,
        None => (Level::Absolute(1e-8), Level::Absolute(1e-7)),
    };
    let e_star = pot.e_star();
    let report = asymptotic_report(&pot, (lo.resolve(e_star), hi.resolve(e_star)))?;
    emit_json(cfg, &report)?;
    let mut out = Outcome::default();
    let fit = &report.fit;
    let de = (fit.exponent_fit - fit.exponent_theory).abs();
    out.check(de <= EXPONENT_TOL, || format!("exponent {} vs {} (off by {de:.3e})", fit.exponent_fit, fit.exponent_theory));
    out.check(fit.rel_err <= COEFF_TOL, || {
        format!("coefficient {} vs {} (rel {:.3e})", fit.coeff_fit, fit.coeff_theory, fit.rel_err)
    });
    if let Some(probe) = &report.blow_up {
        out.check(probe.increasing, || format!("periods near E* not increasing: {:?}", probe.periods));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    p: f64,
    q: f64,
    m: f64,
    verdict: &'static str,
    min_rel_increment: Option<f64>,
    #[serde(rename = "worst_E")]
    worst_e: Option<f64>,
    note: String,
}

fn sweep_pair(p: f64, q: f64, grid: &crate::config::EGrid, tol: f64) -> (SweepRow, Option<anyhow::Error>) {
    let mut row = SweepRow { p, q, m: q / p, verdict: "error", min_rel_increment: None, worst_e: None, note: String::new() };
    let run = || -> Result<(f64, f64)> {
        let pot = PotentialSpec::model(p, q)?;
        let es = grid.energies(pot.e_star())?;
        let ts = es.iter().map(|&e| period_direct(&pot, e, tol).map(|s| s.t)).collect::<pperiod::Result<Vec<_>>>()?;
        let mut worst = (f64::INFINITY, f64::NAN);
        for i in 1..ts.len() {
            let inc = (ts[i] - ts[i - 1]) / ts[i - 1];
            if inc < worst.0 {
                worst = (inc, es[i]);
            }
        }
        Ok(worst)
    };
    match run() {
        Ok((inc, at)) => {
            row.verdict = if inc > 0.0 { "increasing" } else { "not-increasing" };
            row.min_rel_increment = Some(inc);
            row.worst_e = Some(at);
            (row, None)
        }
        Err(e) => {
            row.note = e.to_string();
            (row, Some(e.context(format!("pair (p, q) = ({p}, {q})"))))
        }
    }
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let (Some(pr), Some(qr)) = (cfg.p_range, cfg.q_range) else {
        bail!("sweep needs --p-range and --q-range");
    };
    if cfg.preset.as_deref().is_some_and(|p| p != "model") {
        bail!("sweep runs over the model family only");
    }
    let grid = cfg.e_grid(DEFAULT_SWEEP_GRID)?;
    if grid.count < 2 {
        bail!("sweep needs at least two energies per pair");
    }
    let tol = cfg.tol()?;
    let pairs: Vec<(f64, f64)> =
        pr.values().into_iter().flat_map(|p| qr.values().into_iter().filter(move |&q| q > p).map(move |q| (p, q))).collect();
    if pairs.is_empty() {
        bail!("no pair with q > p in the requested rectangle");
    }
    let (rows, errors): (Vec<SweepRow>, Vec<Option<anyhow::Error>>) =
        pairs.par_iter().map(|&(p, q)| sweep_pair(p, q, &grid, tol)).unzip();
    emit(cfg, Format::Csv, &["p", "q", "m", "verdict", "min_rel_increment", "worst_E", "note"], &rows)?;

    if let Some(err) = errors.into_iter().flatten().next() {
        return Err(err);
    }
    let toggle = cfg.monotone.unwrap_or(Toggle::Auto);
    let mut out = Outcome::default();
    for r in &rows {
        let expected = match toggle {
            Toggle::On => true,
            Toggle::Off => false,
            Toggle::Auto => r.p >= 2.0,
        };
        if expected {
            out.check(r.verdict == "increasing", || {
                format!("pair (p, q) = ({}, {}): T not increasing near E = {:e}", r.p, r.q, r.worst_e.unwrap_or(f64::NAN))
            });
        }
    }
    Ok(out)
}
