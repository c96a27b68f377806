use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::grid;
use crate::quadrature::GaussLegendre;
use crate::verdict::{Verdict, WorstMargin};

/// Verdict of one hypothesis on the sampled grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub verdict: Verdict,
    pub worst_margin: f64,
    pub witness: f64,
    pub note: Option<String>,
}

impl HypothesisCheck {
    fn from_margin(w: WorstMargin, note: Option<String>) -> Self {
        let (verdict, flag) = w.verdict(0.0);
        let note = match (note, flag) {
            (Some(n), Some(f)) => Some(format!("{f}; {n}")),
            (None, Some(f)) => Some(f.to_string()),
            (n, None) => n,
        };
        Self { verdict, worst_margin: w.margin, witness: w.witness, note }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub h1: HypothesisCheck,
    pub h2: HypothesisCheck,
    pub h3: HypothesisCheck,
    /// `min |V'(w)| / w^{p-1}` over `w ∈ (0, B/10³]`.
    pub h2_lower_bound: f64,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.h1.holds() && self.h2.holds() && self.h3.holds()
    }
}

/// Samples the three structural hypotheses on a composite grid over `(0, B)`.
///
/// * H1: `V(A) = V'(A) = 0`, `V(B) = E_*` and `0 < V < E_*` on `(0, A) ∪ (A, B)`.
///   Margin is `min(V, E_* - V) / E_*`. A nonzero `V'(0)` is reported in the
///   note but does not fail the check.
/// * H2: `liminf |V'(w)| / w^{p-1} > 0` as `w → 0⁺`, estimated on `(0, B/10³]`.
/// * H3: `(w - A) V'(w) > 0`, with margin `V'(w) / (ω² (w - A))`.
pub fn check_hypotheses(pot: &PotentialSpec, grid_size: usize) -> HypothesisReport {
    let grid_size = grid_size.max(64);
    let a = pot.center();
    let b = pot.right_end();
    let e_star = pot.e_star();
    let pts = grid::composite(0.0, b, &[a], grid_size);
    let point_tol = 1e-10 * e_star;

    // both V and E_* - V are formed as differences from a nearby point where
    // they vanish, so the sign survives near A, 0 and B
    let gl = GaussLegendre::cached(16);
    let height = |w: f64| pot.rise(a, w - a);
    let depth = |w: f64| {
        if w <= 0.5 * a {
            -gl.integrate(|t| pot.dv(t), 0.0, w)
        } else if w >= a {
            -pot.rise(b, w - b)
        } else {
            e_star - pot.v(w)
        }
    };
    let mut h1 = WorstMargin::new();
    for &w in &pts {
        h1.update(w, height(w).min(depth(w)) / e_star);
    }
    let endpoint_defects = [
        (a, pot.v(a).abs()),
        (a, pot.dv(a).abs() * (b - a)),
        (b, (pot.v(b) - e_star).abs()),
    ];
    for (w, defect) in endpoint_defects {
        if defect > point_tol {
            h1.update(w, -defect / e_star);
        }
    }
    let slope0 = pot.dv(0.0);
    let h1_note = (slope0.abs() * b > point_tol).then(|| format!("V'(0) = {slope0:.3e} is not zero"));

    let p = pot.p();
    let mut h2 = WorstMargin::new();
    let lo = b * 1e-12;
    let hi = b * 1e-3;
    for w in grid::log_spaced(lo, hi, grid_size) {
        h2.update(w, pot.dv(w).abs() / w.powf(p - 1.0));
    }
    let h2_lower_bound = h2.margin;

    let mut h3 = WorstMargin::new();
    let om2 = pot.omega() * pot.omega();
    for &w in &pts {
        h3.update(w, pot.dv(w) / (om2 * (w - a)));
    }

    HypothesisReport {
        h1: HypothesisCheck::from_margin(h1, h1_note),
        h2: HypothesisCheck::from_margin(h2, None),
        h3: HypothesisCheck::from_margin(h3, None),
        h2_lower_bound,
    }
}
