//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pperiod::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
    /// `E* (1 - r^k)`: uniform in `ln(E* - E)`.
    Geom,
}

/// An energy bound, absolute or as a multiple of `E*` (`0.5E*`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level {
    Absolute(f64),
    OfCritical(f64),
}

impl Level {
    pub fn resolve(self, e_star: f64) -> f64 {
        match self {
            Level::Absolute(v) => v,
            Level::OfCritical(f) => f * e_star,
        }
    }
}

impl FromStr for Level {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}"));
        match s.strip_suffix("E*").or_else(|| s.strip_suffix("e*")) {
            Some("") => Ok(Level::OfCritical(1.0)),
            Some(f) => Ok(Level::OfCritical(num(f)?)),
            None => Ok(Level::Absolute(num(s)?)),
        }
    }
}

/// `<linear|log|geom>:min:max:count`.
#[derive(Debug, Clone, PartialEq)]
pub struct EGrid {
    pub spacing: Spacing,
    pub min: Level,
    pub max: Level,
    pub count: usize,
}

impl FromStr for EGrid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [spacing, min, max, count] = parts[..] else {
            bail!("energy grid {s:?} is not <linear|log|geom>:min:max:count");
        };
        let spacing = match spacing {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            "geom" | "geometric" => Spacing::Geom,
            other => bail!("unknown grid spacing {other:?}"),
        };
        let count = count.parse().with_context(|| format!("bad grid count {count:?}"))?;
        if count == 0 {
            bail!("energy grid needs at least one point");
        }
        Ok(EGrid { spacing, min: min.parse()?, max: max.parse()?, count })
    }
}

impl EGrid {
    /// Energies in increasing order, all strictly inside `(0, E*)`.
    pub fn energies(&self, e_star: f64) -> Result<Vec<f64>> {
        let (lo, hi) = (self.min.resolve(e_star), self.max.resolve(e_star));
        if !(lo > 0.0 && lo <= hi && hi < e_star) {
            bail!("energy grid [{lo}, {hi}] must lie strictly inside (0, E* = {e_star})");
        }
        if self.count > 1 && lo == hi {
            bail!("energy grid with {} points needs min < max", self.count);
        }
        let n = self.count;
        let at = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        let es = match self.spacing {
            Spacing::Linear => (0..n).map(|i| lo + (hi - lo) * at(i)).collect(),
            Spacing::Log => pperiod::grid::log_spaced(lo, hi, n),
            Spacing::Geom => {
                let (a, b) = ((e_star - lo).ln(), (e_star - hi).ln());
                (0..n).map(|i| e_star - (a + (b - a) * at(i)).exp()).collect::<Vec<_>>()
            }
        };
        Ok(es)
    }
}

/// `lo:hi:count`, inclusive at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Range {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            bail!("range {s:?} is not lo:hi:count");
        };
        let r = Range {
            lo: lo.parse().with_context(|| format!("bad number {lo:?}"))?,
            hi: hi.parse().with_context(|| format!("bad number {hi:?}"))?,
            count: count.parse().with_context(|| format!("bad count {count:?}"))?,
        };
        if r.count == 0 || !(r.lo <= r.hi) {
            bail!("range {s:?} needs lo ≤ hi and a positive count");
        }
        Ok(r)
    }
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64).collect()
    }
}

fn de_parsed<'de, D, T>(d: D) -> std::result::Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: FromStr<Err = anyhow::Error>,
{
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| s.parse::<T>().map_err(serde::de::Error::custom)).transpose()
}

/// Every setting any subcommand reads. Unset fields fall back to defaults at
/// the point of use.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub preset: Option<String>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub omega: Option<f64>,
    #[serde(default, deserialize_with = "de_parsed")]
    pub e_grid: Option<EGrid>,
    pub tol: Option<f64>,
    pub theta_nodes: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub monotone: Option<Toggle>,
    pub max_disagreement: Option<f64>,
    pub require: Option<Vec<String>>,
    pub grid_size: Option<usize>,
    pub energy: Option<String>,
    pub dt_max: Option<f64>,
    /// Asymptotic fit window `lo:hi`.
    pub decade: Option<String>,
    #[serde(default, deserialize_with = "de_parsed")]
    pub p_range: Option<Range>,
    #[serde(default, deserialize_with = "de_parsed")]
    pub q_range: Option<Range>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),+) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )+
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        overlay!(
            self, flags, command, preset, p, q, omega, e_grid, tol, theta_nodes, output, format, threads, monotone,
            max_disagreement, require, grid_size, energy, dt_max, decade, p_range, q_range
        );
        self
    }

    pub fn tol(&self) -> Result<f64> {
        positive("tol", self.tol.unwrap_or(pperiod::period::DEFAULT_TOL))
    }

    pub fn theta_nodes(&self) -> Result<usize> {
        let n = self.theta_nodes.unwrap_or(pperiod::period::DEFAULT_THETA_NODES);
        if n < 4 {
            bail!("theta-nodes must be at least 4, got {n}");
        }
        Ok(n)
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn potential(&self) -> Result<PotentialSpec> {
        let preset = self.preset.as_deref().unwrap_or("model");
        let pot = match preset {
            "model" => {
                let (Some(p), Some(q)) = (self.p, self.q) else {
                    bail!("the model potential needs both --p and --q");
                };
                PotentialSpec::model(p, q)?
            }
            "harmonic" => {
                if self.q.is_some() {
                    bail!("--q does not apply to the harmonic preset");
                }
                PotentialSpec::harmonic(self.omega.unwrap_or(1.0), self.p.unwrap_or(2.0))?
            }
            other => bail!("unknown preset {other:?} (expected model or harmonic)"),
        };
        if preset == "model" && self.omega.is_some() {
            bail!("--omega only applies to the harmonic preset");
        }
        Ok(pot)
    }

    pub fn e_grid(&self, default: &str) -> Result<EGrid> {
        match &self.e_grid {
            Some(g) => Ok(g.clone()),
            None => default.parse(),
        }
    }
}

pub fn positive(name: &str, v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("{name} must be positive, got {v}");
    }
    Ok(v)
}
