//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Brent's method on `[a, b]`, which must bracket a sign change of `f`.
///
/// Stops when the bracket is narrower than `rel_tol * |x| + 4 eps |x|` (plus a
/// tiny absolute floor) or after `max_iter` iterations.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Root(format!(
            "no sign change on [{a:.6e}, {b:.6e}]: f = {fa:.3e}, {fb:.3e}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic or secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Root(format!("Brent iteration cap {max_iter} reached near {b:.15e}")))
}

/// Solves `g(x) = target` for increasing `g` on `[lo, hi]` by Newton steps,
/// falling back to bisection whenever a step leaves the current bracket.
///
/// `g_and_slope` returns `(g(x), g'(x))`. Iteration stops when the residual is
/// at most `abs_tol` or the bracket collapses.
pub fn safeguarded_newton<F>(
    mut g_and_slope: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
    abs_tol: f64,
    max_iter: usize,
) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut x = guess.clamp(lo, hi);
    for _ in 0..max_iter {
        let (gx, slope) = g_and_slope(x);
        let r = gx - target;
        if r.abs() <= abs_tol {
            return x;
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return x;
        }
        let newton = x - r / slope;
        x = if slope > 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}
