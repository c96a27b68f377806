//! Dormand–Prince 5(4) for autonomous planar systems, with the
//! fourth-order continuous extension. The systems here are autonomous, so
//! the stage times never enter.

pub type State = [f64; 2];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct Dense {
    pub t0: f64,
    pub h: f64,
    r: [State; 5],
}

impl Dense {
    /// State at `t0 + θ h`, `θ ∈ [0, 1]`.
    pub fn eval(&self, theta: f64) -> State {
        let s = 1.0 - theta;
        let r = &self.r;
        std::array::from_fn(|i| r[0][i] + theta * (r[1][i] + s * (r[2][i] + theta * (r[3][i] + s * r[4][i]))))
    }
}

/// Result of one attempted step.
#[derive(Debug, Clone, Copy)]
pub struct Attempt {
    pub y: State,
    /// Derivative at the new point (first stage of the next step).
    pub k7: State,
    /// Scaled error norm; the step is acceptable when `≤ 1`.
    pub err: f64,
    pub dense: Dense,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// One step of size `h` from `(t, y)` with `k1 = f(y)`. `scale` holds the
/// absolute tolerance of each component.
pub fn attempt<F: Fn(&State) -> State>(f: &F, t: f64, y: &State, k1: &State, h: f64, scale: &State) -> Attempt {
    let k2 = f(&axpy(y, h, &[(A21, k1)]));
    let k3 = f(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(&axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y1 = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(&y1);
    let mut sq = 0.0;
    for i in 0..2 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        sq += (e / scale[i]).powi(2);
    }
    let r1: State = std::array::from_fn(|i| y1[i] - y[i]);
    let r2: State = std::array::from_fn(|i| h * k1[i] - r1[i]);
    let r3: State = std::array::from_fn(|i| r1[i] - h * k7[i] - r2[i]);
    let r4: State = std::array::from_fn(|i| {
        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
    });
    Attempt { y: y1, k7, err: (sq / 2.0).sqrt(), dense: Dense { t0: t, h, r: [*y, r1, r2, r3, r4] } }
}

/// Step-size factor for the next attempt after error norm `err`.
pub fn next_factor(err: f64) -> f64 {
    if err == 0.0 {
        5.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_integrated_to_fifth_order() {
        let f = |y: &State| [y[1], -y[0]];
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = [1.0, 0.0];
            for k in 0..n {
                let k1 = f(&y);
                y = attempt(&f, k as f64 * h, &y, &k1, h, &[1.0, 1.0]).y;
            }
            ((y[0] - 1f64.cos()).powi(2) + (y[1] + 1f64.sin()).powi(2)).sqrt()
        };
        let ratio = run(10) / run(20);
        assert!(ratio > 25.0 && ratio < 40.0, "{ratio}");
    }

    #[test]
    fn dense_output_matches_endpoints_and_interior() {
        let f = |y: &State| [y[1], -y[0]];
        let y0 = [1.0, 0.0];
        let a = attempt(&f, 0.0, &y0, &f(&y0), 0.1, &[1.0, 1.0]);
        assert_eq!(a.dense.eval(0.0), y0);
        let end = a.dense.eval(1.0);
        assert!((end[0] - a.y[0]).abs() < 1e-15 && (end[1] - a.y[1]).abs() < 1e-15);
        let mid = a.dense.eval(0.5);
        assert!((mid[0] - 0.05f64.cos()).abs() < 1e-8);
        assert!((mid[1] + 0.05f64.sin()).abs() < 1e-8);
    }
}
