//! The first-order system `u' = φ_{p'}(v)`, `v' = -V'(u)` integrated in the
//! phase plane, as an oracle for the period independent of quadrature.

pub mod dopri5;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::asymptotics::small_e_coefficient;
use crate::error::{Error, Result};
use crate::period::period_direct;
use crate::potentials::{phi, turning_points, PotentialSpec};
use crate::roots::brent;
use dopri5::{attempt, next_factor, Dense, State};

/// Per-step error target relative to the drift budget `10·tol·E`.
const LOCAL_TOL_RATIO: f64 = 1e-4;
const MIN_STEP_RATIO: f64 = 1e-15;
const RETURN_BUDGET: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    /// Position `w`.
    pub u: f64,
    /// Momentum `φ_p(w')`.
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub states: Vec<PhaseState>,
    pub e0: f64,
    /// Largest `|H - E₀|` over the accepted steps and the section crossings.
    pub max_drift: f64,
}

impl OrbitTrace {
    /// Writes `t,u,v,H` rows with a header.
    pub fn write_csv<W: Write>(&self, pot: &PotentialSpec, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Integration(format!("trace export: {e}"));
        w.write_record(["t", "u", "v", "H"]).map_err(io)?;
        for s in &self.states {
            w.serialize((s.t, s.u, s.v, hamiltonian(pot, s.u, s.v))).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Integration(format!("trace export: {e}")))
    }
}

/// A measured closed orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub period: f64,
    /// Time from `(w₁, 0)` to `(w₂, 0)`.
    pub half_period: f64,
    pub trace: OrbitTrace,
}

/// `H(u, v) = V(u) + |v|^{p'}/p'`.
pub fn hamiltonian(pot: &PotentialSpec, u: f64, v: f64) -> f64 {
    let pc = pot.p_conj();
    pot.v(u) + v.abs().powf(pc) / pc
}

/// `(φ_{p'}(v), -V'(u))`.
pub fn vector_field(pot: &PotentialSpec, state: &PhaseState) -> (f64, f64) {
    (phi(pot.p_conj(), state.v), -pot.dv(state.u))
}

fn field(pot: &PotentialSpec) -> impl Fn(&State) -> State + '_ {
    let pc = pot.p_conj();
    move |y: &State| [phi(pc, y[1]), -pot.dv(y[0])]
}

fn period_estimate(pot: &PotentialSpec, e: f64) -> f64 {
    period_direct(pot, e, 1e-8)
        .map(|s| s.t)
        .unwrap_or_else(|_| small_e_coefficient(pot.p(), pot.omega()) * e.powf(0.5 - 1.0 / pot.p()))
}

/// Absolute tolerance per component at energy `e`: orbit width for `u`,
/// peak momentum for `v`.
fn scales(pot: &PotentialSpec, e: f64, local_tol: f64) -> State {
    let pc = pot.p_conj();
    let width = turning_points(pot, e).map(|g| g.width()).unwrap_or(pot.right_end() - pot.center());
    [local_tol * width, local_tol * (pc * e.abs()).powf(1.0 / pc).max(f64::MIN_POSITIVE)]
}

struct Stepper<'a, F> {
    f: F,
    pot: &'a PotentialSpec,
    scale: State,
    t: f64,
    y: State,
    k1: State,
    h: f64,
    h_min: f64,
    dt_max: f64,
    e0: f64,
    budget: f64,
    max_drift: f64,
}

impl<'a, F: Fn(&State) -> State> Stepper<'a, F> {
    /// One accepted step no longer than `cap` in the direction of `h`.
    fn step(&mut self, cap: f64) -> Result<Dense> {
        loop {
            let h = self.h.signum() * self.h.abs().min(self.dt_max).min(cap);
            if h.abs() < self.h_min {
                return Err(Error::Integration(format!("step size {h:.3e} underflow at t = {:.6e}", self.t)));
            }
            let a = attempt(&self.f, self.t, &self.y, &self.k1, h, &self.scale);
            if !a.err.is_finite() {
                self.h = 0.2 * h;
                continue;
            }
            let grow = next_factor(a.err);
            if a.err <= 1.0 {
                self.t += h;
                self.y = a.y;
                self.k1 = a.k7;
                self.h = h * grow;
                self.record_drift(&a.y)?;
                return Ok(a.dense);
            }
            self.h = h * grow.min(1.0);
        }
    }

    fn record_drift(&mut self, y: &State) -> Result<()> {
        let drift = (hamiltonian(self.pot, y[0], y[1]) - self.e0).abs();
        self.max_drift = self.max_drift.max(drift);
        if self.max_drift > self.budget {
            return Err(Error::Integration(format!(
                "energy drift {:.3e} over budget {:.3e} at t = {:.6e}",
                self.max_drift, self.budget, self.t
            )));
        }
        Ok(())
    }
}

fn check_args(dt_max: f64, tol: f64) -> Result<()> {
    if !(dt_max > 0.0) || !(tol > 0.0) {
        return Err(Error::Domain(format!("need dt_max > 0 and tol > 0, got {dt_max}, {tol}")));
    }
    Ok(())
}

/// Time `θ ∈ (0, 1]` where the interpolated momentum vanishes.
fn crossing(dense: &Dense) -> Result<(f64, State)> {
    let theta = brent(|s| dense.eval(s)[1], 0.0, 1.0, 1e-15, 200)?;
    let y = dense.eval(theta);
    Ok((dense.t0 + theta * dense.h, [y[0], 0.0]))
}

/// Integrates from `(w₁(E), 0)` until the orbit returns to `{v = 0, u < A}`.
///
/// The half period is the first crossing of `{v = 0, u > A}`. Both crossings
/// are located on the continuous extension of the step that brackets them.
/// Fails with [`Error::Integration`] when `max |H - E|` exceeds `10·tol·E`,
/// and with [`Error::NonPeriodic`] when no return happens within ten
/// estimated periods.
pub fn simulate_orbit(pot: &PotentialSpec, e: f64, dt_max: f64, tol: f64) -> Result<Orbit> {
    check_args(dt_max, tol)?;
    let geo = turning_points(pot, e)?;
    let a = pot.center();
    let t_est = period_estimate(pot, e);
    let y0 = [geo.w1, 0.0];
    let f = field(pot);
    let k1 = f(&y0);
    let e0 = hamiltonian(pot, geo.w1, 0.0);
    let mut st = Stepper {
        f,
        pot,
        scale: scales(pot, e, LOCAL_TOL_RATIO * tol),
        t: 0.0,
        y: y0,
        k1,
        h: dt_max.min(1e-6 * t_est),
        h_min: MIN_STEP_RATIO * t_est,
        dt_max,
        e0,
        budget: 10.0 * tol * e,
        max_drift: 0.0,
    };
    let mut states = vec![PhaseState { t: 0.0, u: geo.w1, v: 0.0 }];
    let mut half = None;
    loop {
        let prev = st.y;
        let dense = st.step(f64::INFINITY)?;
        let new = st.y;
        let event = match half {
            None if prev[1] > 0.0 && new[1] <= 0.0 => Some(true),
            Some(_) if prev[1] < 0.0 && new[1] >= 0.0 => Some(false),
            _ => None,
        };
        if let Some(is_half) = event {
            let (tc, yc) = crossing(&dense)?;
            if is_half == (yc[0] > a) {
                st.record_drift(&yc)?;
                if tc > states.last().map_or(0.0, |s| s.t) {
                    states.push(PhaseState { t: tc, u: yc[0], v: 0.0 });
                }
                if is_half {
                    half = Some(tc);
                    if new[1] != 0.0 {
                        states.push(PhaseState { t: st.t, u: new[0], v: new[1] });
                    }
                    continue;
                }
                let trace = OrbitTrace { states, e0, max_drift: st.max_drift };
                return Ok(Orbit { period: tc, half_period: half.unwrap_or(f64::NAN), trace });
            }
        }
        states.push(PhaseState { t: st.t, u: new[0], v: new[1] });
        if st.t > RETURN_BUDGET * t_est {
            return Err(Error::NonPeriodic { elapsed: st.t });
        }
    }
}

/// Measured period and the orbit trace; see [`simulate_orbit`].
///
/// ```
/// use pperiod::{dynamics::simulate_period, PotentialSpec};
/// let pot = PotentialSpec::harmonic(2f64.sqrt(), 2.0)?;
/// let (t, trace) = simulate_period(&pot, 0.5, 0.1, 1e-10)?;
/// assert!((t - std::f64::consts::PI * 2f64.sqrt()).abs() < 1e-7 * t);
/// assert!(trace.max_drift <= 1e-9 * 0.5);
/// # Ok::<(), pperiod::Error>(())
/// ```
pub fn simulate_period(pot: &PotentialSpec, e: f64, dt_max: f64, tol: f64) -> Result<(f64, OrbitTrace)> {
    let orbit = simulate_orbit(pot, e, dt_max, tol)?;
    Ok((orbit.period, orbit.trace))
}

/// State after integrating for `duration` (negative runs backward in time).
pub fn integrate_for(
    pot: &PotentialSpec,
    start: PhaseState,
    duration: f64,
    dt_max: f64,
    tol: f64,
) -> Result<PhaseState> {
    check_args(dt_max, tol)?;
    let e0 = hamiltonian(pot, start.u, start.v);
    let y0 = [start.u, start.v];
    let f = field(pot);
    let k1 = f(&y0);
    let span = duration.abs();
    let mut st = Stepper {
        f,
        pot,
        scale: scales(pot, e0, LOCAL_TOL_RATIO * tol),
        t: start.t,
        y: y0,
        k1,
        h: duration.signum() * dt_max.min(1e-6 * span).max(f64::MIN_POSITIVE),
        h_min: MIN_STEP_RATIO * span,
        dt_max,
        e0,
        budget: f64::INFINITY,
        max_drift: 0.0,
    };
    let end = start.t + duration;
    while (end - st.t) * duration.signum() > 0.0 {
        let remaining = (end - st.t).abs();
        st.step(remaining)?;
        if remaining <= st.h_min {
            break;
        }
    }
    Ok(PhaseState { t: end, u: st.y[0], v: st.y[1] })
}
