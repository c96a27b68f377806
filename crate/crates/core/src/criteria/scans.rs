use super::polynomials::{discriminant, f_big, f_on_curve, g_big, taylor_coeff_near_1};
use super::{Criterion, CriterionReport, Witness};
use crate::grid;
use crate::potentials::{admissible, gamma_m};
use crate::verdict::WorstMargin;

const TAYLOR_ZONE: f64 = 1e-2;

fn abs_terms_f(m: f64, y: f64) -> f64 {
    m * m
        + (2.0 * m * (m - 1.0).powi(2) * y.powf(m - 2.0)).abs()
        + (2.0 * m * m * (m - 2.0) * y.powf(m - 1.0)).abs()
        + (m * (m - 2.0) * y.powf(2.0 * m - 2.0)).abs()
}

fn abs_terms_g(m: f64, y: f64) -> f64 {
    (2.0 * (m - 1.0) * (m - 2.0)).abs()
        + m * (2.0 * m - 1.0) * y
        + (2.0 * (m - 1.0) * (2.0 * m - 1.0) * y.powf(m - 1.0)).abs()
        + (2.0 * (m - 2.0) * (2.0 * m - 1.0) * y.powf(m)).abs()
        + ((m - 2.0) * y.powf(2.0 * m - 1.0)).abs()
}

/// Sign certificates on `[0, γ_m]`: `sign(y - 1) F(y) ≥ 0` (convexity of `h`)
/// and `G(y) ≥ 0` (convexity of `1/h'²`).
///
/// Both vanish at `y = 1` (`F` to third, `G` to fourth order), so margins are
/// `sign(y-1) F / |y-1|³` and `G / (y-1)⁴`, each divided by the sum of the
/// absolute values of the terms, and `|y - 1| < 10⁻²` is skipped. The
/// certificate is only claimed for `m > 2`; otherwise the verdict is
/// inconclusive.
pub fn convexity_report(m: f64, n: usize) -> (CriterionReport, CriterionReport) {
    let g = gamma_m(m);
    let mut ys = grid::uniform_excluding(0.0, g, &[1.0], TAYLOR_ZONE, n);
    ys.insert(0, 0.0);
    ys.push(g);
    let mut fw = WorstMargin::new();
    let mut gw = WorstMargin::new();
    for &y in &ys {
        let s = y - 1.0;
        fw.update(y, s.signum() * f_big(m, y) / (s.abs().powi(3) * abs_terms_f(m, y)));
        gw.update(y, g_big(m, y) / (s.powi(4) * abs_terms_g(m, y)));
    }
    let mut fr = CriterionReport::from_scan(Criterion::HConvex, fw, 0.0, ys.len());
    let mut gr = CriterionReport::from_scan(Criterion::InvHprime2Convex, gw, 0.0, ys.len());
    if m <= 2.0 {
        for r in [&mut fr, &mut gr] {
            r.verdict = crate::Verdict::Inconclusive;
            r.note = Some(format!("polynomial certificate applies to m > 2, got m = {m}"));
        }
    }
    (fr, gr)
}

/// `f(a, m, y, y^{m-1}) ≥ 0` on `(0, γ_m]`, margin `f / (y - 1)⁴`.
///
/// Within `|y - 1| < 10⁻²` the quartic Taylor coefficient
/// `(m-1)³ c_{m,a} / 12` stands in for the raw quotient.
pub fn f_nonneg_scan(a: f64, m: f64, n_points: usize) -> CriterionReport {
    let g = gamma_m(m);
    let mut worst = WorstMargin::new();
    let taylor = taylor_coeff_near_1(a, m);
    for k in 1..=n_points {
        let y = g * k as f64 / n_points as f64;
        let s = y - 1.0;
        let margin = if s.abs() < TAYLOR_ZONE { taylor } else { f_on_curve(a, m, y) / s.powi(4) };
        worst.update(y, margin);
    }
    let report = CriterionReport::from_scan(Criterion::FNonneg, worst, 0.0, n_points);
    if admissible(a, m) {
        report
    } else {
        report.with_note(format!("(a, m) = ({a}, {m}) is not admissible"))
    }
}

/// `β(a, m) > 0` on an `n × n` cell-centred grid of the admissible square
/// `(0, 1/2) × (1, 2)`; margin `β` over the sum of its absolute terms.
pub fn discriminant_report(n: usize) -> CriterionReport {
    let mut worst = f64::INFINITY;
    let mut at = (f64::NAN, f64::NAN);
    let mut nonpositive = 0usize;
    for i in 0..n {
        for j in 0..n {
            let a = 0.5 * (i as f64 + 0.5) / n as f64;
            let m = 1.0 + (j as f64 + 0.5) / n as f64;
            let beta = discriminant(a, m).beta;
            let scale = 5.0 * a * a + 10.0 * a * (m + 1.0) + 3.0 * m * m + 14.0 * m + 3.0;
            let margin = beta / scale;
            if beta <= 0.0 {
                nonpositive += 1;
            }
            if margin < worst || margin.is_nan() {
                worst = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
                at = (a, m);
            }
        }
    }
    let mut wm = WorstMargin::new();
    wm.update(f64::NAN, worst);
    let mut report = CriterionReport::from_scan(Criterion::Discriminant, wm, 0.0, n * n);
    report.witness = Witness::Params { a: at.0, m: at.1 };
    if nonpositive > 0 {
        report = report.with_note(format!("β ≤ 0 at {nonpositive} of {} grid points", n * n));
    }
    report
}
