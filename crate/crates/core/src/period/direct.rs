use super::{gap, Method, PeriodSample};
use crate::error::Result;
use crate::potentials::{turning_points, EnergyGeometry, PotentialSpec};
use crate::quadrature::TanhSinh;

/// `T(E) = 2 p'^{-1/p} ∫_{w₁}^{w₂} (E - V(w))^{-1/p} dw`, split at `A`.
///
/// ```
/// use pperiod::{period::period_direct, PotentialSpec};
/// let pot = PotentialSpec::harmonic(2f64.sqrt(), 2.0)?;
/// let s = period_direct(&pot, 0.3, 1e-12)?;
/// assert!((s.t - std::f64::consts::PI * 2f64.sqrt()).abs() < 1e-10);
/// # Ok::<(), pperiod::Error>(())
/// ```
pub fn period_direct(pot: &PotentialSpec, e: f64, tol: f64) -> Result<PeriodSample> {
    let geo = turning_points(pot, e)?;
    period_direct_with(pot, &geo, tol)
}

/// As [`period_direct`], reusing already computed turning points.
pub fn period_direct_with(pot: &PotentialSpec, geo: &EnergyGeometry, tol: f64) -> Result<PeriodSample> {
    let p = pot.p();
    let expo = -1.0 / p;
    let ts = TanhSinh::default();
    let left = ts.integrate(|_, dl, dr| gap(pot, geo, true, dl, dr).powf(expo), geo.w1, pot.center(), tol)?;
    let right = ts.integrate(|_, dl, dr| gap(pot, geo, false, dl, dr).powf(expo), pot.center(), geo.w2, tol)?;
    let scale = 2.0 * pot.p_conj().powf(expo);
    Ok(PeriodSample {
        e: geo.e,
        t: scale * (left.value + right.value),
        dt_de: None,
        method: Method::WIntegral,
        err_estimate: scale * (left.err_estimate + right.err_estimate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_is_isochronous() {
        for omega in [1.0, 2f64.sqrt(), 3.0] {
            let pot = PotentialSpec::harmonic(omega, 2.0).unwrap();
            for frac in [1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6] {
                let s = period_direct(&pot, frac * pot.e_star(), 1e-12).unwrap();
                assert!((s.t * omega / (2.0 * PI) - 1.0).abs() < 1e-10, "ω = {omega}, E = {frac}·E*: {}", s.t);
            }
        }
    }

    #[test]
    fn small_energy_limit_p_equal_two() {
        let pot = PotentialSpec::model(2.0, 4.0).unwrap();
        let s = period_direct(&pot, 1e-6, 1e-10).unwrap();
        assert!((s.t / (2.0 * PI / 2f64.sqrt()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn error_estimate_below_request() {
        let pot = PotentialSpec::model(3.0, 6.0).unwrap();
        for e in [1e-7, 0.01, 0.08, 0.1666] {
            let s = period_direct(&pot, e, 1e-10).unwrap();
            assert!(s.t > 0.0 && s.err_estimate >= 0.0 && s.err_estimate <= 1e-10 * s.t, "{s:?}");
        }
    }

    #[test]
    fn sub_quadratic_exponent_is_supported() {
        let pot = PotentialSpec::model(1.5, 3.0).unwrap();
        let s = period_direct(&pot, 0.05, 1e-10).unwrap();
        assert!(s.t.is_finite() && s.t > 0.0);
    }
}
