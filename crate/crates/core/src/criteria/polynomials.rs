//! Closed-form polynomials of the model family in `y = w^p`, `z = y^{m-1}`.

use serde::{Deserialize, Serialize};

/// `W(y) = y^m - m y + m - 1`, equal to `q V(y^{1/p})` for the model.
pub fn w_poly(m: f64, y: f64) -> f64 {
    y.powf(m) - m * y + m - 1.0
}

/// `(W, W', W'')` at `y`.
pub fn w_jet(m: f64, y: f64) -> (f64, f64, f64) {
    let ym1 = y.powf(m - 1.0);
    (w_poly(m, y), m * (ym1 - 1.0), m * (m - 1.0) * y.powf(m - 2.0))
}

/// `F(y) = -m² + 2m(m-1)² y^{m-2} - 2m²(m-2) y^{m-1} + m(m-2) y^{2m-2}`,
/// identically `2WW'' - W'²`.
pub fn f_big(m: f64, y: f64) -> f64 {
    -m * m + 2.0 * m * (m - 1.0).powi(2) * y.powf(m - 2.0) - 2.0 * m * m * (m - 2.0) * y.powf(m - 1.0)
        + m * (m - 2.0) * y.powf(2.0 * m - 2.0)
}

/// `G(y)`, which carries the sign of `(W / W'²)''`.
pub fn g_big(m: f64, y: f64) -> f64 {
    2.0 * (m - 1.0) * (m - 2.0) - m * (2.0 * m - 1.0) * y + 2.0 * (m - 1.0) * (2.0 * m - 1.0) * y.powf(m - 1.0)
        - 2.0 * (m - 2.0) * (2.0 * m - 1.0) * y.powf(m)
        + (m - 2.0) * y.powf(2.0 * m - 1.0)
}

/// `G'(y)`.
pub fn g_big_prime(m: f64, y: f64) -> f64 {
    let k = 2.0 * m - 1.0;
    -m * k + 2.0 * (m - 1.0).powi(2) * k * y.powf(m - 2.0) - 2.0 * m * (m - 2.0) * k * y.powf(m - 1.0)
        + (m - 2.0) * k * y.powf(2.0 * m - 2.0)
}

/// `G''(y) = 2(m-1)(m-2)(2m-1) y^{m-3} W(y)`.
pub fn g_big_second(m: f64, y: f64) -> f64 {
    2.0 * (m - 1.0) * (m - 2.0) * (2.0 * m - 1.0) * y.powf(m - 3.0) * w_poly(m, y)
}

/// `(F(y), G(y))`.
pub fn fg_convexity(m: f64, y: f64) -> (f64, f64) {
    (f_big(m, y), g_big(m, y))
}

/// The quartic-structure polynomial `f(a, m, y, z)`, evaluated by Horner in `a`.
///
/// ```
/// use pperiod::criteria::f_of;
/// let (a, m) = (1.0 / 3.0, 1.5);
/// assert!((f_of(a, m, 0.0, 0.0) - 10.0 / 9.0).abs() < 1e-15);
/// assert_eq!(f_of(a, m, 1.0, 1.0), 0.0);
/// ```
pub fn f_of(a: f64, m: f64, y: f64, z: f64) -> f64 {
    let z1 = z - 1.0;
    let mz1 = m * z - 1.0;
    let l = m - 1.0 - m * y + y * z;
    let c0 = -3.0 * m * y * z1 * z1 * mz1 + 2.0 * l * (2.0 + (1.0 - 6.0 * m + m * m) * z + 2.0 * m * m * z * z);
    let c1 = 3.0 * m * y * z1 * z1 * z1 - 6.0 * z1 * mz1 * l;
    let c2 = 2.0 * z1 * z1 * l;
    c0 + a * (c1 + a * c2)
}

/// `f` along the curve `z = y^{m-1}`.
pub fn f_on_curve(a: f64, m: f64, y: f64) -> f64 {
    f_of(a, m, y, y.powf(m - 1.0))
}

/// `c_{m,a} = 12ma(a - m - 1) + m(2m² + 7m + 2)`.
pub fn c_ma(a: f64, m: f64) -> f64 {
    12.0 * m * a * (a - m - 1.0) + m * (2.0 * m * m + 7.0 * m + 2.0)
}

/// Coefficient of `(y - 1)⁴` in `f(a, m, y, y^{m-1})`: `(m-1)³ c_{m,a} / 12`.
pub fn taylor_coeff_near_1(a: f64, m: f64) -> f64 {
    (m - 1.0).powi(3) * c_ma(a, m) / 12.0
}

/// `f(a, m, γ_m, m)` in closed form.
pub fn f_at_gamma(a: f64, m: f64) -> f64 {
    let g = crate::potentials::gamma_m(m);
    (m - 1.0).powi(3)
        * (2.0 * a * a - 3.0 * a * (2.0 * m + 2.0 - m * g) + 2.0 * (2.0 * m * m + 5.0 * m + 2.0) - 3.0 * m * g * (m + 1.0))
}

/// Solution `y = n/d` of `f(a, m, y, z) = 0`, which is linear in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Elimination {
    pub y: f64,
    pub n: f64,
    pub d: f64,
    /// `d` vanished (to rounding), so `y` is not determined.
    pub singular: bool,
}

pub fn elimination(a: f64, m: f64, z: f64) -> Elimination {
    let z1 = z - 1.0;
    let n = 2.0
        * (m - 1.0)
        * (a * a * z1 * z1 - 3.0 * a * z1 * (m * z - 1.0) + 2.0 * m * m * z * z + (m * m - 6.0 * m + 1.0) * z + 2.0);
    let d = m * (2.0 * a * a * z1 * z1 + 3.0 * a * (z + 1.0).powi(2) * z1 + 9.0 * z * z + 8.0 * z + 1.0)
        - 2.0 * z * (a * a * z1 * z1 + 3.0 * a * z1 + z + 2.0)
        - m * m * z * (6.0 * a * z1 + z * z + 8.0 * z + 9.0)
        + 2.0 * m * m * m * z * (2.0 * z + 1.0);
    let scale = m * m * m * (1.0 + z * z * z) + 1.0;
    let singular = d.abs() <= 64.0 * f64::EPSILON * scale;
    Elimination { y: if singular { f64::NAN } else { n / d }, n, d, singular }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discriminant {
    pub delta: f64,
    /// `β(a, m) = 5a² - 10a(m+1) - 3m² + 14m - 3`.
    pub beta: f64,
}

/// `δ(a, m) = -3(a-1)²(m-1)²(a-m)² β(a, m)`.
pub fn discriminant(a: f64, m: f64) -> Discriminant {
    let beta = 5.0 * a * a - 10.0 * a * (m + 1.0) - 3.0 * m * m + 14.0 * m - 3.0;
    let delta = -3.0 * (a - 1.0).powi(2) * (m - 1.0).powi(2) * (a - m).powi(2) * beta;
    Discriminant { delta, beta }
}

/// `Φ(x) = x^{mp} - m x^p + m - 1`, i.e. `W(x^p)`.
pub fn phi_big(m: f64, p: f64, x: f64) -> f64 {
    x.powf(m * p) - m * x.powf(p) + m - 1.0
}

/// `K(y) = -2 m p² d/dx (Φ / Φ'²)` at `x = y^{1/p}`.
pub fn k_alternate(p: f64, q: f64, y: f64) -> f64 {
    let m = q / p;
    let x = y.powf(1.0 / p);
    let phi = phi_big(m, p, x);
    let d1 = m * p * (x.powf(m * p - 1.0) - x.powf(p - 1.0));
    let d2 = m * p * ((m * p - 1.0) * x.powf(m * p - 2.0) - (p - 1.0) * x.powf(p - 2.0));
    let deriv = 1.0 / d1 - 2.0 * phi * d2 / (d1 * d1 * d1);
    -2.0 * m * p * p * deriv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_values() {
        for m in [1.3, 2.0, 3.5] {
            assert_eq!(w_poly(m, 1.0), 0.0);
            let g = crate::potentials::gamma_m(m);
            assert!((w_poly(m, g) - (m - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn f_big_is_2wwpp_minus_wp2() {
        for m in [1.4, 2.5, 3.0] {
            for y in [0.1, 0.7, 1.3, 1.6] {
                let (w, w1, w2) = w_jet(m, y);
                assert!((f_big(m, y) - (2.0 * w * w2 - w1 * w1)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_at_remarkable_points() {
        let (a, m) = (1.0 / 3.0, 1.5);
        assert!((c_ma(0.5, m) - 7.5).abs() < 1e-14);
        let g = crate::potentials::gamma_m(m);
        assert!((f_of(a, m, g, m) - f_at_gamma(a, m)).abs() < 1e-12);
        let d = discriminant(a, m);
        assert!((d.beta - 125.0 / 36.0).abs() < 1e-13);
        assert!(d.delta < 0.0);
        assert_eq!(discriminant(0.5, 1.5).beta, 0.0);
    }

    #[test]
    fn elimination_solves_f() {
        let e = elimination(0.3, 1.4, 0.6);
        assert!(!e.singular);
        assert!(f_of(0.3, 1.4, e.y, 0.6).abs() < 1e-12);
    }

    #[test]
    fn k_alternate_m_equal_two() {
        // K = (q/p') y^{1/p - 2}; K(8) = 1/8 at (3, 6)
        assert!((k_alternate(3.0, 6.0, 8.0) - 0.125).abs() < 1e-14);
    }
}
