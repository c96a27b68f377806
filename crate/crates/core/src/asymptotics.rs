//! Behaviour of the period at the two ends of the energy range: the power law
//! `T(E) ~ C(p, ω) E^{1/2 - 1/p}` as `E → 0` and divergence as `E → E*`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::grid;
use crate::period::period_direct;
use crate::potentials::{check_hypotheses, PotentialSpec};

const FIT_POINTS: usize = 10;
const FIT_TOL: f64 = 1e-13;
const PROBE_TOL: f64 = 1e-11;

/// `C(p, ω) = 2√(2π) Γ(1 - 1/p) / (p'^{1/p} ω Γ(3/2 - 1/p))`.
///
/// ```
/// use pperiod::asymptotics::small_e_coefficient;
/// let c = small_e_coefficient(2.0, 3.0);
/// assert!((c * 3.0 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
/// ```
pub fn small_e_coefficient(p: f64, omega: f64) -> f64 {
    let pc = p / (p - 1.0);
    2.0 * (2.0 * std::f64::consts::PI).sqrt() * gamma(1.0 - 1.0 / p)
        / (pc.powf(1.0 / p) * omega * gamma(1.5 - 1.0 / p))
}

/// Exponent `1/2 - 1/p` of the small-energy law.
pub fn small_e_exponent(p: f64) -> f64 {
    0.5 - 1.0 / p
}

/// How `T(E)` behaves as `E → 0⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `p > 2`: `T → 0`.
    Vanishing,
    /// `p = 2`: `T → 2π/ω`.
    Finite,
    /// `p < 2`: `T → ∞`.
    Divergent,
}

impl Regime {
    pub fn of(p: f64) -> Self {
        if p > 2.0 {
            Regime::Vanishing
        } else if p == 2.0 {
            Regime::Finite
        } else {
            Regime::Divergent
        }
    }

    /// `lim_{E → 0⁺} T(E)`.
    pub fn limit(self, omega: f64) -> f64 {
        match self {
            Regime::Vanishing => 0.0,
            Regime::Finite => 2.0 * std::f64::consts::PI / omega,
            Regime::Divergent => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub exponent_fit: f64,
    pub exponent_theory: f64,
    pub coeff_fit: f64,
    pub coeff_theory: f64,
    /// `|coeff_fit - coeff_theory| / coeff_theory`.
    pub rel_err: f64,
    pub energies: Vec<f64>,
    pub periods: Vec<f64>,
}

/// Least-squares line through `(ln E, ln T)`; returns `(slope, e^{intercept})`.
pub fn fit_power_law(energies: &[f64], periods: &[f64]) -> Result<(f64, f64)> {
    if energies.len() != periods.len() || energies.len() < 2 {
        return Err(Error::Fit(format!("need at least two (E, T) pairs, got {} and {}", energies.len(), periods.len())));
    }
    if energies.iter().chain(periods).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Fit("energies and periods must be positive and finite".into()));
    }
    let n = energies.len() as f64;
    let xs: Vec<f64> = energies.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = periods.iter().map(|t| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-12 * n) {
        return Err(Error::Fit(format!("energies span no range in log scale (Sxx = {sxx:.3e})")));
    }
    let slope = sxy / sxx;
    Ok((slope, (my - slope * mx).exp()))
}

/// Fits `T ≈ c E^α` on ten log-spaced energies of `[lo, hi] ⊂ (0, E*/10]`.
pub fn asymptotic_fit(pot: &PotentialSpec, e_decade: (f64, f64)) -> Result<AsymptoticFit> {
    let (lo, hi) = e_decade;
    let cap = pot.e_star() / 10.0;
    if !(lo > 0.0 && lo < hi && hi <= cap) {
        return Err(Error::Domain(format!("energy window [{lo}, {hi}] not inside (0, E*/10 = {cap}]")));
    }
    let energies = grid::log_spaced(lo, hi, FIT_POINTS);
    let periods = energies.iter().map(|&e| period_direct(pot, e, FIT_TOL).map(|s| s.t)).collect::<Result<Vec<_>>>()?;
    let (exponent_fit, coeff_fit) = fit_power_law(&energies, &periods)?;
    let coeff_theory = small_e_coefficient(pot.p(), pot.omega());
    Ok(AsymptoticFit {
        exponent_fit,
        exponent_theory: small_e_exponent(pot.p()),
        coeff_fit,
        coeff_theory,
        rel_err: (coeff_fit - coeff_theory).abs() / coeff_theory,
        energies,
        periods,
    })
}

/// Periods along `E_j = E*(1 - 10^{-j})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpProbe {
    pub exponents: Vec<i32>,
    pub energies: Vec<f64>,
    pub periods: Vec<f64>,
    /// `T(E_j)` strictly increasing in `j`.
    pub increasing: bool,
}

pub fn blow_up_probe(pot: &PotentialSpec, exponents: &[i32]) -> Result<BlowUpProbe> {
    let e_star = pot.e_star();
    let energies: Vec<f64> = exponents.iter().map(|&j| e_star * (1.0 - 10f64.powi(-j))).collect();
    let periods = energies.iter().map(|&e| period_direct(pot, e, PROBE_TOL).map(|s| s.t)).collect::<Result<Vec<_>>>()?;
    let increasing = periods.windows(2).all(|w| w[1] > w[0]);
    Ok(BlowUpProbe { exponents: exponents.to_vec(), energies, periods, increasing })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub fit: AsymptoticFit,
    pub regime: Regime,
    pub limit_at_zero: f64,
    /// Present when the homoclinic hypothesis holds.
    pub blow_up: Option<BlowUpProbe>,
    pub note: Option<String>,
}

/// [`asymptotic_fit`] plus the small-energy regime and, when the potential
/// has a homoclinic loop at `E*`, the divergence probe for `j = 2..8`.
pub fn asymptotic_report(pot: &PotentialSpec, e_decade: (f64, f64)) -> Result<AsymptoticReport> {
    let fit = asymptotic_fit(pot, e_decade)?;
    let regime = Regime::of(pot.p());
    let hyp = check_hypotheses(pot, 64);
    let (blow_up, note) = if hyp.h2.holds() {
        (Some(blow_up_probe(pot, &(2..=8).collect::<Vec<_>>())?), None)
    } else {
        (None, Some(format!("blow-up probe skipped: {}", hyp.h2.note.as_deref().unwrap_or("homoclinic hypothesis fails"))))
    };
    Ok(AsymptoticReport { fit, regime, limit_at_zero: regime.limit(pot.omega()), blow_up, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::TanhSinh;
    use statrs::function::beta::beta;

    #[test]
    fn coefficient_at_p_two() {
        for omega in [0.5, 1.0, 2f64.sqrt(), 3.0] {
            assert!((small_e_coefficient(2.0, omega) * omega - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_is_a_beta_integral() {
        for p in [1.5, 2.5, 3.0, 4.0, 7.0] {
            let omega = 1.3;
            let pc = p / (p - 1.0);
            let scaled = small_e_coefficient(p, omega) * omega * pc.powf(1.0 / p) / (2.0 * 2f64.sqrt());
            let q = TanhSinh::default().integrate(|_, dl, dr| (dl * dr).powf(-1.0 / p), -1.0, 1.0, 1e-13).unwrap();
            assert!((scaled - q.value).abs() < 1e-10, "p = {p}: {scaled} vs {}", q.value);
            assert!((scaled - beta(0.5, 1.0 - 1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let es = grid::log_spaced(1e-3, 1e-2, 10);
        let ts: Vec<f64> = es.iter().map(|e| 2.5 * e.powf(0.3)).collect();
        let (alpha, c) = fit_power_law(&es, &ts).unwrap();
        assert!((alpha - 0.3).abs() < 1e-12 && (c - 2.5).abs() < 1e-10);
        assert!(matches!(fit_power_law(&[1.0, 1.0], &[2.0, 3.0]), Err(Error::Fit(_))));
    }

    #[test]
    fn model_exponent_and_coefficient() {
        for (p, q) in [(2.0, 4.0), (2.5, 4.0), (3.0, 6.0), (4.0, 8.0)] {
            let pot = PotentialSpec::model(p, q).unwrap();
            let fit = asymptotic_fit(&pot, (1e-8, 1e-7)).unwrap();
            assert!((fit.exponent_fit - fit.exponent_theory).abs() <= 1e-3, "({p}, {q}): {fit:?}");
            assert!(fit.rel_err <= 1e-2, "({p}, {q}): {fit:?}");
        }
    }

    #[test]
    fn report_probes_blow_up() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        let r = asymptotic_report(&pot, (1e-8, 1e-7)).unwrap();
        assert_eq!(r.regime, Regime::Vanishing);
        let probe = r.blow_up.unwrap();
        assert!(probe.increasing, "{probe:?}");
        assert_eq!(probe.periods.len(), 7);
        let h = PotentialSpec::harmonic(1.0, 2.0).unwrap();
        let r = asymptotic_report(&h, (1e-4, 1e-3)).unwrap();
        assert_eq!(r.limit_at_zero, 2.0 * std::f64::consts::PI);
        assert!(r.fit.exponent_fit.abs() < 1e-10);
    }

    #[test]
    fn window_outside_range_is_refused() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        assert!(matches!(asymptotic_fit(&pot, (1e-3, 0.1)), Err(Error::Domain(_))));
        assert!(matches!(asymptotic_fit(&pot, (1e-7, 1e-8)), Err(Error::Domain(_))));
    }
}
