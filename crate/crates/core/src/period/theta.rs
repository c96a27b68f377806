use std::f64::consts::FRAC_PI_2;

use super::{c_p, Method, PeriodSample};
use crate::criteria::k_of;
use crate::error::{Error, Result};
use crate::potentials::{turning_points, EnergyGeometry, PotentialSpec};
use crate::quadrature::GaussLegendre;
use crate::roots::safeguarded_newton;

// θ = ±(π/2)(1 - (1 - t)^GRADING) flattens the (cos θ)^{1-2/p} endpoint behaviour
const GRADING: i32 = 6;
const NEWTON_MAX_ITER: usize = 100;

/// The angle variable of the orbit at energy `E`: `√E sin θ = h(y)`, `y = w^p`.
#[derive(Debug, Clone)]
pub struct ThetaParametrization {
    pot: PotentialSpec,
    pub geometry: EnergyGeometry,
    sqrt_e: f64,
    pub c_p: f64,
}

impl ThetaParametrization {
    pub fn new(pot: &PotentialSpec, e: f64) -> Result<Self> {
        let geometry = turning_points(pot, e)?;
        Ok(Self { pot: pot.clone(), geometry, sqrt_e: e.sqrt(), c_p: c_p(pot.p()) })
    }

    pub fn e(&self) -> f64 {
        self.geometry.e
    }

    /// `h(y) = sign(y - A^p) √V(y^{1/p})`.
    pub fn h(&self, y: f64) -> f64 {
        self.pot.h_w(y.powf(1.0 / self.pot.p()))
    }

    /// `y(θ)` for `θ ∈ [-π/2, π/2]`.
    pub fn invert(&self, theta: f64) -> f64 {
        self.invert_w(theta.sin(), theta.signum(), None).powf(self.pot.p())
    }

    // w with H(w) = √E · sin θ, on the side of A given by `side`
    fn invert_w(&self, sin_theta: f64, side: f64, guess: Option<f64>) -> f64 {
        let a = self.pot.center();
        let geo = &self.geometry;
        if sin_theta == 0.0 {
            return a;
        }
        if sin_theta >= 1.0 {
            return geo.w2;
        }
        if sin_theta <= -1.0 {
            return geo.w1;
        }
        let (lo, hi) = if side > 0.0 { (a, geo.w2) } else { (geo.w1, a) };
        let target = self.sqrt_e * sin_theta;
        let start = guess.unwrap_or_else(|| a + target / self.pot.h_w_slope(a));
        safeguarded_newton(
            |w| (self.pot.h_w(w), self.pot.h_w_slope(w)),
            target,
            lo,
            hi,
            start,
            1e-14 * self.sqrt_e,
            NEWTON_MAX_ITER,
        )
    }

    /// Sums `f(θ, cos θ, y) dθ` over `[-π/2, π/2]` with `n` graded
    /// Gauss–Legendre nodes per half. `f` receives `cos θ` computed without
    /// cancellation near the ends.
    fn integrate<F>(&self, n: usize, mut f: F) -> Result<f64>
    where
        F: FnMut(f64, f64, f64) -> Result<f64>,
    {
        let gl = GaussLegendre::cached(n);
        let k = GRADING as f64;
        let p = self.pot.p();
        let mut total = 0.0;
        for side in [1.0, -1.0] {
            let mut guess = None;
            // nodes in increasing t walk from θ = 0 to θ = ±π/2
            for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
                let t = 0.5 * (x + 1.0);
                let s = (k * (-t).ln_1p()).exp();
                let theta = side * FRAC_PI_2 * -(k * (-t).ln_1p()).exp_m1();
                let cos_theta = (FRAC_PI_2 * s).sin();
                let dtheta_dt = FRAC_PI_2 * k * (1.0 - t).powi(GRADING - 1);
                let w = self.invert_w(theta.sin(), side, guess);
                guess = Some(w);
                total += 0.5 * wt * dtheta_dt * f(theta, cos_theta, w.powf(p))?;
            }
        }
        Ok(total)
    }

    fn j_integrand(&self, cos_theta: f64, y: f64) -> Result<f64> {
        let p = self.pot.p();
        let jet = self.pot.h_jet_y(y, 1)?;
        Ok(cos_theta.powf(1.0 - 2.0 / p) / (y.powf(1.0 - 1.0 / p) * jet.d1))
    }

    /// `J(E) = ∫ (cos θ)^{1-2/p} / (y^{1/p'} h'(y)) dθ`.
    pub fn j(&self, n: usize) -> Result<f64> {
        self.integrate(n, |_, c, y| self.j_integrand(c, y))
    }

    /// `J'(E) = -1/(2√E) ∫ K(y) (cos θ)^{1-2/p} sin θ dθ`.
    pub fn j_prime(&self, n: usize) -> Result<f64> {
        let p = self.pot.p();
        let pot = &self.pot;
        let integral = self.integrate(n, |theta, c, y| Ok(k_of(pot, y)? * c.powf(1.0 - 2.0 / p) * theta.sin()))?;
        Ok(-integral / (2.0 * self.sqrt_e))
    }
}

/// `y(θ)` solving `h(y) = √E sin θ` on the side of `A^p` given by the sign of `θ`.
///
/// ```
/// use pperiod::{period::{invert_h, ThetaParametrization}, PotentialSpec};
/// // q = 2p: h(y) = (y - 1)/√q, so at E = 1/24 and q = 6, y(θ) = 1 + sin θ / 2
/// let tp = ThetaParametrization::new(&PotentialSpec::model(3.0, 6.0)?, 1.0 / 24.0)?;
/// let y = invert_h(&tp, 0.7);
/// assert!((y - (1.0 + 0.7f64.sin() / 2.0)).abs() < 1e-13);
/// # Ok::<(), pperiod::Error>(())
/// ```
pub fn invert_h(tp: &ThetaParametrization, theta: f64) -> f64 {
    tp.invert(theta.clamp(-FRAC_PI_2, FRAC_PI_2))
}

fn require_p_at_least_two(pot: &PotentialSpec) -> Result<()> {
    if pot.p() < 2.0 {
        return Err(Error::UnsupportedRoute(format!(
            "the θ-integrand is singular for p = {} < 2; use the w-integral",
            pot.p()
        )));
    }
    Ok(())
}

/// `T(E) = c_p E^{1/2-1/p} J(E)`, Gauss–Legendre with `n_nodes` per half in `θ`.
///
/// The error estimate is the change from `n_nodes / 2` nodes.
pub fn period_theta(pot: &PotentialSpec, e: f64, n_nodes: usize) -> Result<PeriodSample> {
    require_p_at_least_two(pot)?;
    let tp = ThetaParametrization::new(pot, e)?;
    let scale = tp.c_p * e.powf(0.5 - 1.0 / pot.p());
    let fine = tp.j(n_nodes)?;
    let coarse = tp.j((n_nodes / 2).max(2))?;
    Ok(PeriodSample {
        e,
        t: scale * fine,
        dt_de: None,
        method: Method::ThetaIntegral,
        err_estimate: scale * (fine - coarse).abs(),
    })
}

/// `dT/dE = T [(p - 2)/(2pE) + J'/J]`, with `J` and `J'` on the same `θ` grid.
pub fn dperiod_theta(pot: &PotentialSpec, e: f64, n_nodes: usize) -> Result<PeriodSample> {
    require_p_at_least_two(pot)?;
    let p = pot.p();
    let tp = ThetaParametrization::new(pot, e)?;
    let scale = tp.c_p * e.powf(0.5 - 1.0 / p);
    let eval = |n: usize| -> Result<(f64, f64)> {
        let j = tp.j(n)?;
        let jp = tp.j_prime(n)?;
        let t = scale * j;
        Ok((t, t * ((p - 2.0) / (2.0 * p * e) + jp / j)))
    };
    let (t, dt) = eval(n_nodes)?;
    let (_, dt_coarse) = eval((n_nodes / 2).max(2))?;
    Ok(PeriodSample { e, t, dt_de: Some(dt), method: Method::ThetaDerivative, err_estimate: (dt - dt_coarse).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::{period_direct, DEFAULT_THETA_NODES};
    use std::f64::consts::PI;

    #[test]
    fn endpoints_and_center() {
        let pot = PotentialSpec::model(3.0, 5.0).unwrap();
        let tp = ThetaParametrization::new(&pot, 0.05).unwrap();
        assert_eq!(invert_h(&tp, 0.0), 1.0);
        assert!((invert_h(&tp, FRAC_PI_2) - tp.geometry.w2.powi(3)).abs() < 1e-14);
        assert!((invert_h(&tp, -FRAC_PI_2) - tp.geometry.w1.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn residual_is_small() {
        let pot = PotentialSpec::model(2.5, 4.0).unwrap();
        let e = 0.07;
        let tp = ThetaParametrization::new(&pot, e).unwrap();
        for theta in [-1.5, -0.3, 1e-9, 0.8, 1.57] {
            let y = invert_h(&tp, theta);
            assert!((tp.h(y) - e.sqrt() * f64::sin(theta)).abs() <= 1e-13 * e.sqrt());
        }
    }

    #[test]
    fn harmonic_theta_route() {
        let pot = PotentialSpec::harmonic(3.0, 2.0).unwrap();
        let s = period_theta(&pot, 1.7, DEFAULT_THETA_NODES).unwrap();
        assert!((s.t - 2.0 * PI / 3.0).abs() < 1e-12);
        let d = dperiod_theta(&pot, 1.7, DEFAULT_THETA_NODES).unwrap();
        assert!(d.dt_de.unwrap().abs() < 1e-10);
    }

    #[test]
    fn agrees_with_direct_route() {
        for (p, q, e) in [(3.0, 6.0, 0.1), (2.5, 5.0, 0.25 * (1.0 / 2.5 - 0.2))] {
            let pot = PotentialSpec::model(p, q).unwrap();
            let a = period_direct(&pot, e, 1e-12).unwrap().t;
            let b = period_theta(&pot, e, DEFAULT_THETA_NODES).unwrap().t;
            assert!((a - b).abs() < 1e-8 * a, "({p}, {q}): {a} vs {b}");
        }
    }

    #[test]
    fn refuses_sub_quadratic_exponent() {
        let pot = PotentialSpec::model(1.5, 3.0).unwrap();
        assert!(matches!(period_theta(&pot, 0.05, 32), Err(Error::UnsupportedRoute(_))));
        assert!(matches!(dperiod_theta(&pot, 0.05, 32), Err(Error::UnsupportedRoute(_))));
    }
}
