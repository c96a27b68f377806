//! The period `T(E)` by two quadrature routes and `dT/dE` by two formulas.
//!
//! * [`period_direct`]: tanh-sinh in `w` on `[w₁, A]` and `[A, w₂]`.
//! * [`period_theta`]: Gauss–Legendre in the angle `θ`, `√E sin θ = h(y)`.
//! * [`dperiod_chow_wang`]: the `R(w) = V'² - p'VV''` integral.
//! * [`dperiod_theta`]: differentiation of the `θ` integral through `K(y)`.

mod chow_wang;
mod direct;
mod theta;

use serde::{Deserialize, Serialize};

pub use chow_wang::{dperiod_chow_wang, r_over_slope2};
pub use direct::{period_direct, period_direct_with};
pub use theta::{dperiod_theta, invert_h, period_theta, ThetaParametrization};

/// Default relative tolerance of the `w`-space quadrature.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default Gauss–Legendre nodes per half interval in `θ`.
pub const DEFAULT_THETA_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    WIntegral,
    ThetaIntegral,
    ChowWang,
    ThetaDerivative,
    Ode,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::WIntegral => "w-integral",
            Method::ThetaIntegral => "theta-integral",
            Method::ChowWang => "chow-wang",
            Method::ThetaDerivative => "theta-derivative",
            Method::Ode => "ode",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One evaluation of the period (and possibly its derivative) at energy `E`.
///
/// `err_estimate` refers to `dt_de` when it is present, otherwise to `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSample {
    pub e: f64,
    pub t: f64,
    pub dt_de: Option<f64>,
    pub method: Method,
    pub err_estimate: f64,
}

/// `E - V` at a node of `[w₁, A]` or `[A, w₂]`, taken as a difference from
/// the closest of the three points where it is known exactly.
pub(crate) fn gap(pot: &crate::PotentialSpec, geo: &crate::EnergyGeometry, left_half: bool, dl: f64, dr: f64) -> f64 {
    let a = pot.center();
    if left_half {
        if dl <= dr {
            -pot.rise(geo.w1, dl)
        } else {
            geo.e - pot.rise(a, -dr)
        }
    } else if dr <= dl {
        -pot.rise(geo.w2, -dr)
    } else {
        geo.e - pot.rise(a, dl)
    }
}

/// `c_p = 2 / (p · p'^{1/p})`.
pub fn c_p(p: f64) -> f64 {
    let pc = p / (p - 1.0);
    2.0 / (p * pc.powf(1.0 / p))
}
