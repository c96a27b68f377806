use super::{Criterion, CriterionReport};
use crate::error::Result;
use crate::grid;
use crate::potentials::{turning_points, PotentialSpec};
use crate::verdict::WorstMargin;

const TOL_R: f64 = 1e-12;
const TOL_CHICONE: f64 = 1e-10;
const TOL_K: f64 = 1e-9;
const TOL_H: f64 = 1e-8;
// h'' and h''' lose digits like 1/y and 1/y² as y → 0
const H_GRID_START: f64 = 1e-3;

/// `R(w) = V'(w)² - p' V(w) V''(w)`.
pub fn r_of(pot: &PotentialSpec, w: f64) -> Result<f64> {
    let d1 = pot.dv(w);
    Ok(d1 * d1 - pot.p_conj() * pot.height(w) * pot.d2v_or_err(w)?)
}

/// Positivity of `R` on `(0, A) ∪ (A, B)` together with `V'' > 0` on `(0, B)`.
///
/// `R > 0` is the same as `V |V'|^{-p'}` increasing on `(0, A)` and on `(A, B)`.
/// Margins: `R / (V'² + p'V|V''|)` and `V'' / ω²`.
pub fn chow_wang_report(pot: &PotentialSpec, n: usize) -> CriterionReport {
    let crit = Criterion::ChowWangR;
    if !pot.has_d2() {
        return CriterionReport::inconclusive(crit, "potential does not supply V''");
    }
    let pc = pot.p_conj();
    let om2 = pot.omega() * pot.omega();
    let pts = grid::composite(0.0, pot.right_end(), &[pot.center()], n);
    let mut r_worst = WorstMargin::new();
    let mut v2_worst = WorstMargin::new();
    for &w in &pts {
        let d1 = pot.dv(w);
        let v = pot.height(w);
        let d2 = pot.d2v(w).unwrap_or(f64::NAN);
        let r = d1 * d1 - pc * v * d2;
        r_worst.update(w, r / (d1 * d1 + pc * v * d2.abs()));
        v2_worst.update(w, d2 / om2);
    }
    let side = v2_worst.margin;
    let mut report = if side < r_worst.margin {
        CriterionReport::from_scan(crit, v2_worst, TOL_R, pts.len())
            .with_note(format!("side condition V'' > 0 fails at w = {:.6e}", v2_worst.witness))
    } else {
        CriterionReport::from_scan(crit, r_worst, TOL_R, pts.len())
    };
    if side > TOL_R && report.verdict == crate::Verdict::Fails {
        report = report.with_note("R changes sign or vanishes; V|V'|^{-p'} is not strictly increasing");
    }
    report
}

/// `(V / V'²)'' = (6VV''² - 3V'²V'' - 2VV'V''') / V'⁴`.
pub fn chicone_second_derivative(pot: &PotentialSpec, w: f64) -> Result<f64> {
    let (num, _) = chicone_terms(pot, w)?;
    let d1 = pot.dv(w);
    Ok(num / (d1 * d1 * d1 * d1))
}

fn chicone_terms(pot: &PotentialSpec, w: f64) -> Result<(f64, f64)> {
    let v = pot.height(w);
    let d1 = pot.dv(w);
    let d2 = pot.d2v_or_err(w)?;
    let d3 = pot.d3v_or_err(w)?;
    let t = [-3.0 * d1 * d1 * d2, -2.0 * v * d1 * d3, 6.0 * v * d2 * d2];
    Ok((t.iter().sum(), t.iter().map(|x| x.abs()).sum()))
}

/// Convexity of `V / V'²` away from `0`, `A` and `B` (radius `10⁻³ B`).
pub fn chicone_report(pot: &PotentialSpec, n: usize) -> CriterionReport {
    let crit = Criterion::ChiconeConvexity;
    if !pot.has_d2() || !pot.has_d3() {
        return CriterionReport::inconclusive(crit, "potential does not supply V'' and V'''");
    }
    let b = pot.right_end();
    let pts = grid::uniform_excluding(0.0, b, &[0.0, pot.center(), b], 1e-3 * b, n);
    let mut worst = WorstMargin::new();
    for &w in &pts {
        let margin = match chicone_terms(pot, w) {
            Ok((num, scale)) if scale > 0.0 => num / scale,
            Ok(_) => 0.0,
            Err(_) => f64::NAN,
        };
        worst.update(w, margin);
    }
    CriterionReport::from_scan(crit, worst, TOL_CHICONE, pts.len())
}

/// `K(y) = (y² h'' + y h'/p') / (y^{2 + 1/p'} h'³)`.
///
/// ```
/// use pperiod::{criteria::k_of, PotentialSpec};
/// // q = 2p: K(y) = (q/p') y^{1/p - 2}
/// let pot = PotentialSpec::model(3.0, 6.0)?;
/// let y: f64 = 1.5;
/// assert!((k_of(&pot, y)? - 4.0 * y.powf(1.0 / 3.0 - 2.0)).abs() < 1e-10);
/// # Ok::<(), pperiod::Error>(())
/// ```
pub fn k_of(pot: &PotentialSpec, y: f64) -> Result<f64> {
    let jet = pot.h_jet_y(y, 2)?;
    let h1 = jet.d1;
    let h2 = jet.d2.unwrap_or(f64::NAN);
    let pc = pot.p_conj();
    Ok((y * y * h2 + y * h1 / pc) / (y.powf(2.0 + 1.0 / pc) * h1 * h1 * h1))
}

/// `K` strictly decreasing on the orbit range `(y₁(E_max), y₂(E_max))`.
///
/// Margin at consecutive points: the normalized slope
/// `-(ΔK/Δy) (y₂ - y₁) / max|K|`.
pub fn k_monotonicity_report(pot: &PotentialSpec, e_max: f64, n: usize) -> Result<CriterionReport> {
    let crit = Criterion::KDecreasing;
    if !pot.has_d2() {
        return Ok(CriterionReport::inconclusive(crit, "potential does not supply V''"));
    }
    let geo = turning_points(pot, e_max)?;
    let p = pot.p();
    let (y1, y2) = (geo.w1.powf(p), geo.w2.powf(p));
    let len = y2 - y1;
    let mut ys: Vec<f64> = (1..=n).map(|i| y1 + len * i as f64 / (n + 1) as f64).collect();
    for k in 0..8 {
        let off = 10f64.powf(-2.0 - 4.0 * k as f64 / 7.0) * len;
        ys.push(y1 + off);
        ys.push(y2 - off);
    }
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    let ks = ys.iter().map(|&y| k_of(pot, y)).collect::<Result<Vec<_>>>()?;
    let mut worst = WorstMargin::new();
    for i in 0..ys.len() - 1 {
        let slope = (ks[i + 1] - ks[i]) / (ys[i + 1] - ys[i]);
        let scale = ks[i].abs().max(ks[i + 1].abs());
        worst.update(0.5 * (ys[i] + ys[i + 1]), -slope * len / scale);
    }
    let mut report = CriterionReport::from_scan(crit, worst, TOL_K, ys.len());
    if let Some((p, q)) = pot.is_model() {
        if (q - 2.0 * p).abs() <= 1e-12 * q {
            report = report.with_note(format!("closed form K(y) = (q/p') y^(1/p - 2) = {} y^{}", q / pot.p_conj(), 1.0 / p - 2.0));
        }
    }
    Ok(report)
}

fn h_grid(pot: &PotentialSpec, n: usize) -> (Vec<f64>, f64) {
    let p = pot.p();
    let top = pot.right_end().powf(p);
    let mut pts = grid::composite(0.0, top, &[pot.center().powf(p)], n);
    pts.retain(|&y| y >= H_GRID_START * top);
    (pts, top)
}

/// `h'' > 0` on `[10⁻³ B^p, B^p)`, margin `h'' B^p / h'`.
pub fn h_convex_report(pot: &PotentialSpec, n: usize) -> CriterionReport {
    let crit = Criterion::HConvex;
    if !pot.has_d2() {
        return CriterionReport::inconclusive(crit, "potential does not supply V''");
    }
    let (pts, top) = h_grid(pot, n);
    let mut worst = WorstMargin::new();
    for &y in &pts {
        let margin = match pot.h_jet_y(y, 2) {
            Ok(j) => j.d2.unwrap_or(f64::NAN) * top / j.d1,
            Err(_) => f64::NAN,
        };
        worst.update(y, margin);
    }
    CriterionReport::from_scan(crit, worst, TOL_H, pts.len())
}

/// `(1/h'²)'' > 0`, which has the sign of `3h''² - h'h'''`; margin
/// `(3h''² - h'h''') B^{2p} / h'²`.
pub fn inv_hprime2_report(pot: &PotentialSpec, n: usize) -> CriterionReport {
    let crit = Criterion::InvHprime2Convex;
    if !pot.has_d2() || !pot.has_d3() {
        return CriterionReport::inconclusive(crit, "potential does not supply V'' and V'''");
    }
    let (pts, top) = h_grid(pot, n);
    let mut worst = WorstMargin::new();
    for &y in &pts {
        let margin = match pot.h_jet_y(y, 3) {
            Ok(j) => {
                let (h1, h2, h3) = (j.d1, j.d2.unwrap_or(f64::NAN), j.d3.unwrap_or(f64::NAN));
                (3.0 * h2 * h2 - h1 * h3) * top * top / (h1 * h1)
            }
            Err(_) => f64::NAN,
        };
        worst.update(y, margin);
    }
    CriterionReport::from_scan(crit, worst, TOL_H, pts.len())
}
