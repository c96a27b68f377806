use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::error::{Error, Result};
use crate::roots::brent;

const ROOT_REL_TOL: f64 = 1e-15;
const ROOT_MAX_ITER: usize = 200;
const SHAPE_SAMPLES: usize = 32;

/// The closed orbit at energy `E`: turning points `w₁ < A < w₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGeometry {
    pub e: f64,
    pub w1: f64,
    pub w2: f64,
}

impl EnergyGeometry {
    /// `γ(w, E) = p'(E - V(w))`.
    pub fn gamma(&self, pot: &PotentialSpec, w: f64) -> f64 {
        pot.gamma(w, self.e)
    }

    pub fn width(&self) -> f64 {
        self.w2 - self.w1
    }
}

/// Solves `V(w) = E` on `(0, A)` and on `(A, B)`.
///
/// Each root is bracketed by the sign of `V - E` at the ends of its half of
/// the well, refined by Brent and polished with one Newton step on the
/// accurate `V`. A root is rejected when `V - E` changes sign more than once
/// on a sampled grid, which is what a violation of `(w - A) V'(w) > 0` looks
/// like from the outside.
pub fn turning_points(pot: &PotentialSpec, e: f64) -> Result<EnergyGeometry> {
    let e_star = pot.e_star();
    if !(e > 0.0 && e < e_star) {
        return Err(Error::Domain(format!("energy {e} outside (0, {e_star})")));
    }
    let a = pot.center();
    let b = pot.right_end();
    let g = |w: f64| pot.v(w) - e;
    let polish = |w: f64| {
        let d = pot.dv(w);
        let step = if d != 0.0 { g(w) / d } else { 0.0 };
        let candidate = w - step;
        if step.is_finite() && g(candidate).abs() <= g(w).abs() {
            candidate
        } else {
            w
        }
    };
    let bracket_err = |side: &str, err: Error| match err {
        Error::Root(msg) => Error::Hypothesis(format!("V = E has no simple root on the {side} of A: {msg}")),
        other => other,
    };
    let w1 = polish(brent(g, 0.0, a, ROOT_REL_TOL, ROOT_MAX_ITER).map_err(|e| bracket_err("left", e))?);
    let w2 = polish(brent(g, a, b, ROOT_REL_TOL, ROOT_MAX_ITER).map_err(|e| bracket_err("right", e))?);
    if !(0.0 < w1 && w1 < a && a < w2 && w2 < b) {
        return Err(Error::Hypothesis(format!(
            "turning points out of order: w1 = {w1}, A = {a}, w2 = {w2}, B = {b}"
        )));
    }
    check_single_well(pot, e, w1, w2)?;
    Ok(EnergyGeometry { e, w1, w2 })
}

fn check_single_well(pot: &PotentialSpec, e: f64, w1: f64, w2: f64) -> Result<()> {
    let n = SHAPE_SAMPLES;
    let inside = |lo: f64, hi: f64| (1..n).map(move |i| lo + (hi - lo) * i as f64 / n as f64);
    for w in inside(w1, w2) {
        if pot.v(w) >= e {
            return Err(Error::Hypothesis(format!("V(w) ≥ E at w = {w} between the turning points")));
        }
    }
    for w in inside(0.0, w1).chain(inside(w2, pot.right_end())) {
        if pot.v(w) <= e {
            return Err(Error::Hypothesis(format!("V(w) ≤ E at w = {w} outside the turning points")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::CustomPotential;
    use proptest::prelude::*;

    #[test]
    fn closed_form_for_m_equal_two() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        let g = turning_points(&pot, 1.0 / 24.0).unwrap();
        assert!((g.w1 - 2f64.powf(-1.0 / 3.0)).abs() < 1e-14);
        assert!((g.w2 - 1.5f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn small_energy_width() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        let e = 1e-10;
        let g = turning_points(&pot, e).unwrap();
        let expected = 2.0 * (2.0 * e).sqrt() / pot.omega();
        assert!((g.width() / expected - 1.0).abs() < 1e-4);
    }

    #[test]
    fn near_homoclinic_energy() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        let g = turning_points(&pot, pot.e_star() * (1.0 - 1e-9)).unwrap();
        assert!(g.w1 < 1e-2);
        assert!(pot.right_end() - g.w2 < 1e-6);
    }

    #[test]
    fn rejects_energy_outside_range() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        assert!(matches!(turning_points(&pot, 0.0), Err(Error::Domain(_))));
        assert!(matches!(turning_points(&pot, pot.e_star()), Err(Error::Domain(_))));
        assert!(matches!(turning_points(&pot, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn second_well_is_refused() {
        // a dip centred at 1.6 creates a second local minimum in (A, B)
        let dip = |w: f64| {
            let s = (w - 1.6) / 0.2;
            if s.abs() < 1.0 {
                0.25 * (1.0 - s * s).powi(3)
            } else {
                0.0
            }
        };
        let ddip = |w: f64| {
            let s = (w - 1.6) / 0.2;
            if s.abs() < 1.0 {
                -0.25 * 3.0 * (1.0 - s * s).powi(2) * 2.0 * s / 0.2
            } else {
                0.0
            }
        };
        let c = CustomPotential::new("two-well", move |w| (w - 1.0).powi(2) - dip(w), move |w| 2.0 * (w - 1.0) - ddip(w));
        let pot = PotentialSpec::custom(2.0, 1.0, 2.0, c).unwrap();
        let r = turning_points(&pot, 0.15);
        assert!(matches!(r, Err(Error::Hypothesis(_))), "{r:?}");
    }

    proptest! {
        #[test]
        fn left_inverse_of_v(t in 1e-6f64..(1.0 - 1e-6), pq in prop::sample::select(vec![(2.0, 4.0), (3.0, 6.0), (3.0, 5.0), (2.5, 4.0), (1.5, 3.0)])) {
            let pot = PotentialSpec::model(pq.0, pq.1).unwrap();
            let e = t * pot.e_star();
            let g = turning_points(&pot, e).unwrap();
            prop_assert!((pot.v(g.w1) - e).abs() <= 1e-12 * pot.e_star());
            prop_assert!((pot.v(g.w2) - e).abs() <= 1e-12 * pot.e_star());
            prop_assert!(g.w1 < 1.0 && g.w2 > 1.0);
        }
    }
}
