//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pperiod::asymptotics::asymptotic_fit;
use pperiod::criteria::{
    discriminant_report, elimination, f_big, f_of, f_on_curve, g_big, g_big_prime, h_convex_report, inv_hprime2_report,
    k_monotonicity_report, k_of, taylor_coeff_near_1,
};
use pperiod::dynamics::simulate_orbit;
use pperiod::grid::log_spaced;
use pperiod::period::{dperiod_chow_wang, dperiod_theta, period_direct, period_theta, DEFAULT_THETA_NODES};
use pperiod::potentials::gamma_m;
use pperiod::{PotentialSpec, Verdict};

const CROSS_PAIRS: [(f64, f64); 5] = [(2.0, 4.0), (3.0, 6.0), (3.0, 5.0), (3.0, 9.0), (2.5, 4.0)];
const QUAD_TOL: f64 = 1e-12;
const ODE_TOL: f64 = 1e-10;
const ODE_DT_MAX: f64 = 0.1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn period(pot: &PotentialSpec, e: f64) -> f64 {
    period_direct(pot, e, QUAD_TOL).unwrap().t
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn isochronous_oracle() -> Outcome {
    let mut worst_t: f64 = 0.0;
    let mut worst_dt: f64 = 0.0;
    for omega in [1.0, 2f64.sqrt(), 3.0] {
        let pot = PotentialSpec::harmonic(omega, 2.0).unwrap();
        let exact = 2.0 * PI / omega;
        for frac in [0.1, 0.5, 0.9] {
            let e = frac * pot.e_star();
            let ode = simulate_orbit(&pot, e, ODE_DT_MAX, ODE_TOL).unwrap().period;
            let th = period_theta(&pot, e, DEFAULT_THETA_NODES).unwrap().t;
            for t in [period(&pot, e), th, ode] {
                worst_t = worst_t.max(rel(t, exact));
            }
            let cw = dperiod_chow_wang(&pot, e, QUAD_TOL).unwrap().dt_de.unwrap();
            let dth = dperiod_theta(&pot, e, DEFAULT_THETA_NODES).unwrap().dt_de.unwrap();
            worst_dt = worst_dt.max(cw.abs()).max(dth.abs());
        }
    }
    outcome(
        worst_t <= 1e-7 && worst_dt <= 1e-7,
        format!("max rel period error {worst_t:.2e}, max |dT/dE| {worst_dt:.2e}"),
    )
}

fn cross_method_agreement() -> Outcome {
    let mut worst_theta: f64 = 0.0;
    let mut worst_ode: f64 = 0.0;
    for (p, q) in CROSS_PAIRS {
        let pot = PotentialSpec::model(p, q).unwrap();
        for e in log_spaced(1e-6 * pot.e_star(), 0.95 * pot.e_star(), 20) {
            let t = period(&pot, e);
            let th = period_theta(&pot, e, DEFAULT_THETA_NODES).unwrap().t;
            let ode = simulate_orbit(&pot, e, ODE_DT_MAX, ODE_TOL).unwrap().period;
            worst_theta = worst_theta.max(rel(th, t));
            worst_ode = worst_ode.max(rel(ode, t));
        }
    }
    outcome(
        worst_theta <= 1e-8 && worst_ode <= 1e-5,
        format!("max |T_w - T_theta|/T {worst_theta:.2e}, max |T_w - T_ode|/T {worst_ode:.2e}"),
    )
}

fn derivative_consistency() -> Outcome {
    let mut worst_cw: f64 = 0.0;
    let mut worst_th: f64 = 0.0;
    for (p, q) in CROSS_PAIRS {
        let pot = PotentialSpec::model(p, q).unwrap();
        let e_star = pot.e_star();
        for k in 1..=10 {
            let e = e_star * (0.05 + 0.85 * (k - 1) as f64 / 9.0);
            let step = 1e-4 * e;
            let fd = (period(&pot, e + step) - period(&pot, e - step)) / (2.0 * step);
            let cw = dperiod_chow_wang(&pot, e, QUAD_TOL).unwrap().dt_de.unwrap();
            let th = dperiod_theta(&pot, e, DEFAULT_THETA_NODES).unwrap().dt_de.unwrap();
            worst_cw = worst_cw.max(rel(cw, fd));
            worst_th = worst_th.max(rel(th, fd));
        }
    }
    outcome(
        worst_cw <= 1e-4 && worst_th <= 1e-4,
        format!("max rel deviation from finite differences: R-integral {worst_cw:.2e}, theta {worst_th:.2e}"),
    )
}

fn monotonicity_and_limits() -> Outcome {
    let pairs = [
        (3.0, 4.0),
        (3.0, 5.0),
        (3.0, 6.0),
        (3.0, 8.0),
        (3.0, 10.0),
        (4.0, 6.0),
        (4.0, 8.0),
        (4.0, 10.0),
        (4.0, 14.0),
        (6.0, 9.0),
        (6.0, 12.0),
        (6.0, 15.0),
    ];
    let mut non_monotone = Vec::new();
    let mut worst_small: f64 = 0.0;
    let mut worst_large = f64::INFINITY;
    for (p, q) in pairs {
        let pot = PotentialSpec::model(p, q).unwrap();
        let e_star = pot.e_star();
        let mut es = log_spaced(1e-8 * e_star, 0.5 * e_star, 20);
        es.extend((1..=20).map(|k| e_star * (1.0 - 10f64.powf(-0.3 - 7.7 * k as f64 / 20.0))));
        let ts: Vec<f64> = es.iter().map(|&e| period(&pot, e)).collect();
        if !ts.windows(2).all(|w| w[1] > w[0]) {
            non_monotone.push((p, q));
        }
        let half = period(&pot, 0.5 * e_star);
        worst_small = worst_small.max(period(&pot, 1e-8 * e_star) / half);
        worst_large = worst_large.min(period(&pot, e_star * (1.0 - 1e-8)) / half);
    }
    outcome(
        non_monotone.is_empty() && worst_small < 0.05 && worst_large > 20.0,
        format!(
            "non-monotone pairs {non_monotone:?}, max T(1e-8 E*)/T(E*/2) {worst_small:.3}, \
             min T(E*(1-1e-8))/T(E*/2) {worst_large:.2} (needs > 20)"
        ),
    )
}

fn small_energy_law() -> Outcome {
    let mut worst_exp: f64 = 0.0;
    let mut worst_coeff: f64 = 0.0;
    for (p, q) in [(2.0, 4.0), (2.5, 4.0), (3.0, 6.0), (4.0, 8.0)] {
        let pot = PotentialSpec::model(p, q).unwrap();
        let fit = asymptotic_fit(&pot, (1e-8, 1e-7)).unwrap();
        worst_exp = worst_exp.max((fit.exponent_fit - fit.exponent_theory).abs());
        worst_coeff = worst_coeff.max(fit.rel_err);
    }
    outcome(
        worst_exp <= 1e-3 && worst_coeff <= 1e-2,
        format!("max exponent error {worst_exp:.2e}, max coefficient rel error {worst_coeff:.2e}"),
    )
}

fn admissible_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(1e-3..0.5 - 1e-3), rng.gen_range(1.0 + 1e-3..2.0 - 1e-3))
}

/// Fourth derivative at `y = 1`: central differences at `h, 2h, 4h`, two
/// Richardson passes.
fn fourth_derivative_at_one(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    let d4 = |h: f64| (g(1.0 + 2.0 * h) - 4.0 * g(1.0 + h) + 6.0 * g(1.0) - 4.0 * g(1.0 - h) + g(1.0 - 2.0 * h)) / h.powi(4);
    let (d1, d2, d3) = (d4(h), d4(2.0 * h), d4(4.0 * h));
    let (r1, r2) = ((4.0 * d1 - d2) / 3.0, (4.0 * d2 - d3) / 3.0);
    (16.0 * r1 - r2) / 15.0
}

fn polynomial_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let close = |x: f64, y: f64, tol: f64| (x - y).abs() <= tol * (1.0 + y.abs());
    let mut failures: Vec<String> = Vec::new();
    let mut worst_taylor: f64 = 0.0;
    for _ in 0..100 {
        let (a, m) = admissible_point(&mut rng);
        let y = rng.gen_range(0.0..gamma_m(m));
        if !close(f_of(a, m, 0.0, 0.0), 2.0 * (1.0 - a) * (2.0 - a) * (m - 1.0), 1e-9) {
            failures.push(format!("f(a,m,0,0) at ({a}, {m})"));
        }
        if !close(f_of(a, m, 1.0, 1.0), 0.0, 1e-9) {
            failures.push(format!("f(a,m,1,1) at ({a}, {m})"));
        }
        let z = y;
        if !close(f_of(a, 2.0, z, z), 2.0 * (1.0 - a) * (2.0 - a) * (z - 1.0).powi(4), 1e-9) {
            failures.push(format!("f(a,2,z,z) at ({a}, {z})"));
        }
        let oracle = fourth_derivative_at_one(|y| f_on_curve(a, m, y), 2e-2) / 24.0;
        let coeff = taylor_coeff_near_1(a, m);
        worst_taylor = worst_taylor.max(rel(oracle, coeff));
        if !close(f_big(m, 1.0), 0.0, 1e-9) || !close(g_big(m, 1.0), 0.0, 1e-9) || !close(g_big_prime(m, 1.0), 0.0, 1e-9)
        {
            failures.push(format!("F(1), G(1), G'(1) at m = {m}"));
        }
    }
    outcome(
        failures.is_empty() && worst_taylor <= 1e-3,
        format!("{} identity failures {:?}, max Taylor-coefficient rel error {worst_taylor:.2e}", failures.len(), failures.first()),
    )
}

fn sign_link() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut compared, mut agree) = (0usize, 0usize);
    let mut first_mismatch = None;
    for _ in 0..200 {
        let p = rng.gen_range(2.05..6.0);
        let q = p * rng.gen_range(1.05..3.0);
        let m = q / p;
        let y = rng.gen_range(0.02..0.98) * gamma_m(m);
        let pot = PotentialSpec::model(p, q).unwrap();
        let f = f_on_curve(1.0 / p, m, y);
        if f.abs() <= 1e-8 {
            continue;
        }
        let step = 1e-6;
        let dk = (k_of(&pot, y + step).unwrap() - k_of(&pot, y - step).unwrap()) / (2.0 * step);
        compared += 1;
        if (-dk).signum() == f.signum() {
            agree += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some((p, q, y, f, dk));
        }
    }
    outcome(
        compared > 0 && agree == compared,
        format!("sign agreement {agree}/{compared}, first mismatch {first_mismatch:?}"),
    )
}

fn elimination_machinery() -> Outcome {
    let report = discriminant_report(50);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut singular = 0;
    for _ in 0..100 {
        let (a, m) = admissible_point(&mut rng);
        let z = rng.gen_range(1e-6..=m);
        let el = elimination(a, m, z);
        if el.singular {
            singular += 1;
            continue;
        }
        // f is affine in y
        let f0 = f_of(a, m, 0.0, z);
        let slope = f_of(a, m, 1.0, z) - f0;
        let scale = f0.abs() + (slope * el.y).abs();
        worst = worst.max(f_of(a, m, el.y, z).abs() / scale);
    }
    outcome(
        report.verdict == Verdict::Holds && worst <= 1e-9,
        format!(
            "beta > 0 on 50x50 grid: {} (worst normalized beta {:.3e} at {:?}; {}), \
             max back-substitution residual {worst:.2e}, {singular} singular",
            report.verdict,
            report.worst_margin,
            report.witness,
            report.note.as_deref().unwrap_or("no nonpositive points"),
        ),
    )
}

fn criterion_implication() -> Outcome {
    let pairs = [(2.2, 5.0), (2.5, 6.0), (3.0, 7.0), (3.0, 9.0), (3.0, 12.0), (4.0, 9.0), (4.0, 12.0), (5.0, 11.0), (5.0, 20.0), (6.0, 13.0)];
    let mut premise = 0;
    let mut violations = Vec::new();
    for (p, q) in pairs {
        let pot = PotentialSpec::model(p, q).unwrap();
        let convex = h_convex_report(&pot, 400).holds() && inv_hprime2_report(&pot, 400).holds();
        if !convex {
            continue;
        }
        premise += 1;
        let k = k_monotonicity_report(&pot, pot.e_star() * (1.0 - 1e-9), 400).unwrap();
        if !k.holds() {
            violations.push((p, q, k.worst_margin));
        }
    }
    outcome(
        premise > 0 && violations.is_empty(),
        format!("premise held on {premise}/{} pairs with m > 2, implication violated on {violations:?}", pairs.len()),
    )
}

type Entry = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Entry; 9] = [
        ("isochronous oracle", isochronous_oracle, Duration::from_secs(1)),
        ("cross-method agreement", cross_method_agreement, Duration::from_secs(30)),
        ("derivative consistency", derivative_consistency, Duration::from_secs(30)),
        ("monotone period with limits at both ends", monotonicity_and_limits, Duration::from_secs(60)),
        ("small-energy power law", small_energy_law, Duration::from_secs(20)),
        ("polynomial identities", polynomial_identities, Duration::from_secs(5)),
        ("sign of -K' matches f", sign_link, Duration::from_secs(5)),
        ("discriminant and elimination", elimination_machinery, Duration::from_secs(5)),
        ("convexity implies K decreasing", criterion_implication, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} [{}] {name}: {} ({:.2} s, budget {} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
