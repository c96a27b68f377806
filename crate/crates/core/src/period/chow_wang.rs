use super::{gap, period_direct_with, Method, PeriodSample};
use crate::error::{Error, Result};
use crate::potentials::{turning_points, PotentialSpec};
use crate::quadrature::TanhSinh;

const PATCH: f64 = 1e-4;

/// `R(w) / V'(w)² = 1 - p' V V'' / V'²`, interpolated linearly across
/// `|w - A| < radius` where the quotient is `0/0` to rounding.
pub fn r_over_slope2(pot: &PotentialSpec, w: f64, radius: f64) -> Result<f64> {
    let a = pot.center();
    let raw = |x: f64| -> Result<f64> {
        if x == a {
            return Ok(1.0 - 0.5 * pot.p_conj());
        }
        let d1 = pot.dv(x);
        Ok(1.0 - pot.p_conj() * (pot.height(x) / (d1 * d1)) * pot.d2v_or_err(x)?)
    };
    if (w - a).abs() < radius {
        let (lo, hi) = (raw(a - radius)?, raw(a + radius)?);
        return Ok(lo + (hi - lo) * (w - (a - radius)) / (2.0 * radius));
    }
    raw(w)
}

/// `dT/dE = 2/(p'E) ∫ R(w) / (γ(w,E)^{1/p} V'(w)²) dw`, with `γ = p'(E - V)`.
///
/// The removable singularity at `A` is bridged over
/// `|w - A| < 10⁻⁴ min(B - A, w₂ - w₁)`.
pub fn dperiod_chow_wang(pot: &PotentialSpec, e: f64, tol: f64) -> Result<PeriodSample> {
    if pot.p() < 2.0 {
        return Err(Error::UnsupportedRoute(format!("R-integral formula needs p ≥ 2, got {}", pot.p())));
    }
    if !pot.has_d2() {
        return Err(Error::MissingDerivative("''"));
    }
    let geo = turning_points(pot, e)?;
    let p = pot.p();
    let pc = pot.p_conj();
    let radius = PATCH * (pot.right_end() - pot.center()).min(geo.width());
    let ts = TanhSinh::default();
    let integrand = |left: bool, x: f64, dl: f64, dr: f64| {
        let r = r_over_slope2(pot, x, radius).unwrap_or(f64::NAN);
        r * gap(pot, &geo, left, dl, dr).powf(-1.0 / p)
    };
    let a = pot.center();
    // the integral may vanish, so the floor is relative to the period integral
    let t = period_direct_with(pot, &geo, tol)?;
    let floor = tol * t.t / (2.0 * pc.powf(-1.0 / p));
    let left = ts.integrate_with_floor(|x, dl, dr| integrand(true, x, dl, dr), geo.w1, a, tol, floor)?;
    let right = ts.integrate_with_floor(|x, dl, dr| integrand(false, x, dl, dr), a, geo.w2, tol, floor)?;
    let scale = 2.0 / (pc * e) * pc.powf(-1.0 / p);
    Ok(PeriodSample {
        e,
        t: t.t,
        dt_de: Some(scale * (left.value + right.value)),
        method: Method::ChowWang,
        err_estimate: scale * (left.err_estimate + right.err_estimate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_at_center() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        for s in [1e-3, -1e-3, 1e-5, -1e-6] {
            let r = r_over_slope2(&pot, 1.0 + s, 0.0).unwrap();
            assert!((r - 0.25).abs() < 20.0 * s.abs(), "s = {s}: {r}");
        }
        assert!((r_over_slope2(&pot, 1.0, 1e-6).unwrap() - 0.25).abs() < 1e-5);
        assert_eq!(r_over_slope2(&pot, 1.0, 0.0).unwrap(), 0.25);
    }

    #[test]
    fn harmonic_derivative_vanishes() {
        let pot = PotentialSpec::harmonic(2f64.sqrt(), 2.0).unwrap();
        let d = dperiod_chow_wang(&pot, 0.4, 1e-10).unwrap();
        assert!(d.dt_de.unwrap().abs() < 1e-12);
    }
}
