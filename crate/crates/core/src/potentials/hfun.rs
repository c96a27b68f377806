//! The signed square root `H(w) = sign(w - A) √V(w)` and its pullback
//! `h(y) = H(y^{1/p})`, with derivatives up to third order.

use std::f64::consts::SQRT_2;

use super::PotentialSpec;
use crate::error::Result;

// below these distances to A the closed forms are replaced by a linear
// interpolation between the two sides
const PATCH_D2: f64 = 1e-5;
const PATCH_D3: f64 = 1e-3;

/// A function value with derivatives; `d2` and `d3` are only filled on request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HJet {
    pub h: f64,
    pub d1: f64,
    pub d2: Option<f64>,
    pub d3: Option<f64>,
}

impl PotentialSpec {
    /// `V(w)` as a difference from the minimum, accurate near `A`.
    pub fn height(&self, w: f64) -> f64 {
        self.rise(self.center(), w - self.center())
    }

    /// `H(w) = sign(w - A) √V(w)`.
    pub fn h_w(&self, w: f64) -> f64 {
        let s = w - self.center();
        if s == 0.0 {
            0.0
        } else {
            self.height(w).max(0.0).sqrt().copysign(s)
        }
    }

    /// `H'(w) = |V'| / (2√V)`, continuous at `A` with value `ω/√2`.
    pub fn h_w_slope(&self, w: f64) -> f64 {
        if w == self.center() {
            return self.omega() / SQRT_2;
        }
        let v = self.height(w);
        self.dv(w).abs() / (2.0 * v.sqrt())
    }

    fn h_w_d2_raw(&self, w: f64) -> Result<f64> {
        let v = self.height(w);
        let d1 = self.dv(w);
        let d2 = self.d2v_or_err(w)?;
        let s = (w - self.center()).signum();
        Ok(s * (2.0 * v * d2 - d1 * d1) / (4.0 * v * v.sqrt()))
    }

    fn h_w_d3_raw(&self, w: f64) -> Result<f64> {
        let v = self.height(w);
        let d1 = self.dv(w);
        let d2 = self.d2v_or_err(w)?;
        let d3 = self.d3v_or_err(w)?;
        let s = (w - self.center()).signum();
        let n = 2.0 * v * d2 - d1 * d1;
        Ok(s * (4.0 * v * v * d3 - 3.0 * n * d1) / (8.0 * v * v * v.sqrt()))
    }

    fn patched<F>(&self, w: f64, radius: f64, raw: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let a = self.center();
        let r = radius * (self.right_end() - a);
        if (w - a).abs() >= r {
            return raw(w);
        }
        let lo = raw(a - r)?;
        let hi = raw(a + r)?;
        Ok(lo + (hi - lo) * (w - (a - r)) / (2.0 * r))
    }

    /// `H` and its derivatives in `w`, up to `order` (1, 2 or 3).
    pub fn h_jet_w(&self, w: f64, order: usize) -> Result<HJet> {
        let d2 = if order >= 2 { Some(self.patched(w, PATCH_D2, |x| self.h_w_d2_raw(x))?) } else { None };
        let d3 = if order >= 3 { Some(self.patched(w, PATCH_D3, |x| self.h_w_d3_raw(x))?) } else { None };
        Ok(HJet { h: self.h_w(w), d1: self.h_w_slope(w), d2, d3 })
    }

    /// `h(y) = H(y^{1/p})` and its derivatives in `y`, up to `order`.
    pub fn h_jet_y(&self, y: f64, order: usize) -> Result<HJet> {
        let a = 1.0 / self.p();
        let w = y.powf(a);
        let w1 = a * w / y;
        let w2 = a * (a - 1.0) * w / (y * y);
        let w3 = a * (a - 1.0) * (a - 2.0) * w / (y * y * y);
        let jet = self.h_jet_w(w, order)?;
        Ok(HJet {
            h: jet.h,
            d1: jet.d1 * w1,
            d2: jet.d2.map(|h2| h2 * w1 * w1 + jet.d1 * w2),
            d3: match (jet.d2, jet.d3) {
                (Some(h2), Some(h3)) => Some(h3 * w1 * w1 * w1 + 3.0 * h2 * w1 * w2 + jet.d1 * w3),
                _ => None,
            },
        })
    }
}
