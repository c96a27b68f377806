//! Potentials `V` for `(φ_p(w'))' + V'(w) = 0`, the model family
//! `V' = φ_q − φ_p`, turning points and the structural hypotheses.
//!
//! Every potential is described by a [`PotentialSpec`]: the function and its
//! derivatives, the exponent `p`, the interior minimum `A`, the right end `B`
//! of the well (`V(B) = V(0) = E_*`) and `ω = √V''(A)`.

mod geometry;
mod hfun;
mod hypotheses;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub use geometry::{turning_points, EnergyGeometry};
pub use hfun::HJet;
pub use hypotheses::{check_hypotheses, HypothesisCheck, HypothesisReport};

/// `φ_p(s) = |s|^{p-2} s`, with `φ_p(0) = 0` for every `p > 1`.
pub fn phi(p: f64, s: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.abs().powf(p - 2.0) * s
    }
}

/// Exponent pair `(p, q)`; `q` is only present for the model family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    p: f64,
    q: Option<f64>,
}

impl Exponents {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("exponent p = {p} must exceed 1")));
        }
        Ok(Self { p, q: None })
    }

    pub fn with_q(p: f64, q: f64) -> Result<Self> {
        let e = Self::new(p)?;
        if !(q > p && q.is_finite()) {
            return Err(Error::Domain(format!("need q > p, got p = {p}, q = {q}")));
        }
        Ok(Self { q: Some(q), ..e })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    /// Hölder conjugate `p' = p / (p - 1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `a = 1/p`.
    pub fn a(&self) -> f64 {
        1.0 / self.p
    }

    /// `m = q/p`.
    pub fn m(&self) -> Option<f64> {
        self.q.map(|q| q / self.p)
    }

    /// `γ_m = m^{1/(m-1)}`, the right end of the well in the `y = w^p` variable.
    pub fn gamma_m(&self) -> Option<f64> {
        self.m().map(gamma_m)
    }

    /// `a ∈ (0, 1/2)` and `m ∈ (1, 2)`, i.e. `2 < p < q < 2p`.
    pub fn admissible(&self) -> bool {
        self.m().is_some_and(|m| admissible(self.a(), m))
    }
}

/// `γ_m = m^{1/(m-1)}`.
pub fn gamma_m(m: f64) -> f64 {
    m.powf(1.0 / (m - 1.0))
}

pub fn admissible(a: f64, m: f64) -> bool {
    a > 0.0 && a < 0.5 && m > 1.0 && m < 2.0
}

/// A potential with analytic derivatives. `d2`/`d3` return `None` when not supplied.
pub trait Potential: Send + Sync + fmt::Debug {
    fn value(&self, w: f64) -> f64;
    fn d1(&self, w: f64) -> f64;
    fn d2(&self, _w: f64) -> Option<f64> {
        None
    }
    fn d3(&self, _w: f64) -> Option<f64> {
        None
    }
    /// `V(base + delta) - V(base)` evaluated without cancellation, if the
    /// potential knows how. Used at the turning points, where the period
    /// integrand is singular.
    fn rise(&self, _base: f64, _delta: f64) -> Option<f64> {
        None
    }
}

/// `V(w) = |w|^q/q - |w|^p/p + 1/p - 1/q`, so that `V' = φ_q - φ_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPotential {
    pub p: f64,
    pub q: f64,
}

impl ModelPotential {
    // expm1(k L)/k summed as a series: Σ_{n≥2} (q^{n-1} - p^{n-1}) L^n / n!
    fn series(&self, l: f64) -> f64 {
        let (mut qk, mut pk) = (self.q, self.p);
        let mut ln_fact = l * l / 2.0;
        let mut sum = 0.0;
        for n in 2..80 {
            sum += (qk - pk) * ln_fact;
            if (qk + pk) * ln_fact.abs() <= 1e-17 * sum.abs() {
                break;
            }
            qk *= self.q;
            pk *= self.p;
            ln_fact *= l / (n + 1) as f64;
        }
        sum
    }
}

impl Potential for ModelPotential {
    fn value(&self, w: f64) -> f64 {
        let l = w.abs().ln();
        if (self.q * l).abs() <= 0.5 {
            self.series(l)
        } else {
            (self.q * l).exp_m1() / self.q - (self.p * l).exp_m1() / self.p
        }
    }

    fn d1(&self, w: f64) -> f64 {
        if w == 0.0 {
            return 0.0;
        }
        let x = w.abs();
        let l = x.ln();
        let v = if ((self.q - 1.0) * l).abs() <= 0.5 {
            ((self.q - 1.0) * l).exp_m1() - ((self.p - 1.0) * l).exp_m1()
        } else {
            x.powf(self.q - 1.0) - x.powf(self.p - 1.0)
        };
        v * w.signum()
    }

    fn d2(&self, w: f64) -> Option<f64> {
        let x = w.abs();
        Some((self.q - 1.0) * x.powf(self.q - 2.0) - (self.p - 1.0) * x.powf(self.p - 2.0))
    }

    fn d3(&self, w: f64) -> Option<f64> {
        let x = w.abs();
        let v = (self.q - 1.0) * (self.q - 2.0) * x.powf(self.q - 3.0)
            - (self.p - 1.0) * (self.p - 2.0) * x.powf(self.p - 3.0);
        Some(v * w.signum())
    }

    fn rise(&self, base: f64, delta: f64) -> Option<f64> {
        if base <= 0.0 || base + delta <= 0.0 {
            return None;
        }
        let l = (delta / base).ln_1p();
        let (uq, up) = (base.powf(self.q), base.powf(self.p));
        if (self.q * l).abs() > 0.5 {
            return Some(uq * (self.q * l).exp_m1() / self.q - up * (self.p * l).exp_m1() / self.p);
        }
        // Σ_n (q^{n-1} u^q - p^{n-1} u^p) l^n / n!, first coefficient via expm1
        let mut sum = up * ((self.q - self.p) * base.ln()).exp_m1() * l;
        let (mut cq, mut cp) = (uq * self.q, up * self.p);
        let mut ln_fact = l * l / 2.0;
        for n in 2..80 {
            sum += (cq - cp) * ln_fact;
            // a coefficient may vanish, so stop on the size of the parts
            if (cq.abs() + cp.abs()) * ln_fact.abs() <= 1e-17 * sum.abs() {
                break;
            }
            cq *= self.q;
            cp *= self.p;
            ln_fact *= l / (n + 1) as f64;
        }
        Some(sum)
    }
}

/// `V(w) = ω²(w - c)²/2`: an isochronous center when `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicPotential {
    pub omega: f64,
    pub center: f64,
}

impl Potential for HarmonicPotential {
    fn value(&self, w: f64) -> f64 {
        let s = w - self.center;
        0.5 * self.omega * self.omega * s * s
    }

    fn d1(&self, w: f64) -> f64 {
        self.omega * self.omega * (w - self.center)
    }

    fn d2(&self, _w: f64) -> Option<f64> {
        Some(self.omega * self.omega)
    }

    fn d3(&self, _w: f64) -> Option<f64> {
        Some(0.0)
    }

    fn rise(&self, base: f64, delta: f64) -> Option<f64> {
        Some(0.5 * self.omega * self.omega * delta * (delta + 2.0 * (base - self.center)))
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied potential. Only `V` and `V'` are mandatory.
#[derive(Clone)]
pub struct CustomPotential {
    label: String,
    value: RealFn,
    d1: RealFn,
    d2: Option<RealFn>,
    d3: Option<RealFn>,
}

impl CustomPotential {
    pub fn new(
        label: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), value: Arc::new(value), d1: Arc::new(d1), d2: None, d3: None }
    }

    pub fn with_d2(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn with_d3(mut self, d3: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d3 = Some(Arc::new(d3));
        self
    }
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("label", &self.label)
            .field("d2", &self.d2.is_some())
            .field("d3", &self.d3.is_some())
            .finish()
    }
}

impl Potential for CustomPotential {
    fn value(&self, w: f64) -> f64 {
        (self.value)(w)
    }
    fn d1(&self, w: f64) -> f64 {
        (self.d1)(w)
    }
    fn d2(&self, w: f64) -> Option<f64> {
        self.d2.as_ref().map(|f| f(w))
    }
    fn d3(&self, w: f64) -> Option<f64> {
        self.d3.as_ref().map(|f| f(w))
    }
}

/// Which family a [`PotentialSpec`] came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Model { p: f64, q: f64 },
    Harmonic { omega: f64, center: f64 },
    Custom { label: String },
}

/// A potential together with its critical data `A`, `B`, `E_*`, `ω` and exponent `p`.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    exponents: Exponents,
    potential: Arc<dyn Potential>,
    family: Family,
    center: f64,
    right_end: f64,
    e_star: f64,
    omega: f64,
}

impl PotentialSpec {
    /// The model potential of `(φ_p(w'))' + φ_q(w) - φ_p(w) = 0`.
    ///
    /// `A = 1`, `E_* = 1/p - 1/q`, `B = (q/p)^{1/(q-p)}`, `ω = √(q - p)`.
    /// In the variable `y = w^p` the right end is `B^p = γ_m`.
    pub fn model(p: f64, q: f64) -> Result<Self> {
        let exponents = Exponents::with_q(p, q)?;
        Ok(Self {
            exponents,
            potential: Arc::new(ModelPotential { p, q }),
            family: Family::Model { p, q },
            center: 1.0,
            right_end: (q / p).powf(1.0 / (q - p)),
            e_star: 1.0 / p - 1.0 / q,
            omega: (q - p).sqrt(),
        })
    }

    /// `V(w) = ω²(w - 1)²/2` on `(0, 2)` with `E_* = ω²/2`.
    pub fn harmonic(omega: f64, p: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("ω = {omega} must be positive")));
        }
        let exponents = Exponents::new(p)?;
        let center = 1.0;
        Ok(Self {
            exponents,
            potential: Arc::new(HarmonicPotential { omega, center }),
            family: Family::Harmonic { omega, center },
            center,
            right_end: 2.0 * center,
            e_star: 0.5 * omega * omega * center * center,
            omega,
        })
    }

    /// Wraps an arbitrary potential with minimum at `center` and `V(right_end) = V(0)`.
    ///
    /// `ω` comes from `V''(A)` when supplied, otherwise from a central
    /// difference of `V'`.
    pub fn custom(p: f64, center: f64, right_end: f64, potential: CustomPotential) -> Result<Self> {
        let exponents = Exponents::new(p)?;
        if !(0.0 < center && center < right_end) {
            return Err(Error::Domain(format!("need 0 < A < B, got A = {center}, B = {right_end}")));
        }
        let e_star = potential.value(0.0);
        let scale = right_end - center;
        let omega2 = potential.d2(center).unwrap_or_else(|| {
            let h = 1e-5 * scale;
            (potential.d1(center + h) - potential.d1(center - h)) / (2.0 * h)
        });
        if !(e_star > 0.0) {
            return Err(Error::Hypothesis(format!("E_* = V(0) = {e_star} must be positive")));
        }
        if !(omega2 > 0.0) {
            return Err(Error::Hypothesis(format!("V''(A) = {omega2} must be positive")));
        }
        let label = potential.label.clone();
        Ok(Self {
            exponents,
            potential: Arc::new(potential),
            family: Family::Custom { label },
            center,
            right_end,
            e_star,
            omega: omega2.sqrt(),
        })
    }

    pub fn exponents(&self) -> Exponents {
        self.exponents
    }

    pub fn p(&self) -> f64 {
        self.exponents.p
    }

    pub fn p_conj(&self) -> f64 {
        self.exponents.conjugate()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `A`, the interior minimum.
    pub fn center(&self) -> f64 {
        self.center
    }

    /// `B`, the second root of `V = E_*`.
    pub fn right_end(&self) -> f64 {
        self.right_end
    }

    pub fn e_star(&self) -> f64 {
        self.e_star
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn v(&self, w: f64) -> f64 {
        self.potential.value(w)
    }

    pub fn dv(&self, w: f64) -> f64 {
        self.potential.d1(w)
    }

    pub fn d2v(&self, w: f64) -> Option<f64> {
        self.potential.d2(w)
    }

    pub fn d3v(&self, w: f64) -> Option<f64> {
        self.potential.d3(w)
    }

    pub(crate) fn d2v_or_err(&self, w: f64) -> Result<f64> {
        self.d2v(w).ok_or(Error::MissingDerivative("''"))
    }

    pub(crate) fn d3v_or_err(&self, w: f64) -> Result<f64> {
        self.d3v(w).ok_or(Error::MissingDerivative("'''"))
    }

    pub fn has_d2(&self) -> bool {
        self.d2v(self.center).is_some()
    }

    pub fn has_d3(&self) -> bool {
        self.d3v(self.center).is_some()
    }

    /// `γ(w, E) = p' (E - V(w))`.
    pub fn gamma(&self, w: f64, e: f64) -> f64 {
        self.p_conj() * (e - self.v(w))
    }

    /// `V(base + delta) - V(base)` with relative accuracy for small `delta`.
    ///
    /// Falls back to 16-point Gauss–Legendre on `V'` over the short interval
    /// when the potential has no exact difference formula; the interval is
    /// kept at most half as long as its distance to `w = 0`, where `V'` may
    /// be non-analytic.
    pub fn rise(&self, base: f64, delta: f64) -> f64 {
        if let Some(r) = self.potential.rise(base, delta) {
            return r;
        }
        if delta.abs() <= (0.5 * base.abs()).min(0.25 * (self.right_end - self.center)) {
            GaussLegendre::cached(16).integrate(|t| self.dv(base + t), 0.0, delta)
        } else {
            self.v(base + delta) - self.v(base)
        }
    }

    /// Second root of `V(w) = E` on `(A, B)` side, etc. are in [`turning_points`].
    pub fn is_model(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Model { p, q } => Some((p, q)),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::Model { p, q } => format!("model(p={p}, q={q})"),
            Family::Harmonic { omega, .. } => format!("harmonic(ω={omega}, p={})", self.p()),
            Family::Custom { label } => format!("{label}(p={})", self.p()),
        }
    }
}
