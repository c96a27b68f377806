use proptest::prelude::*;

use pperiod::dynamics::simulate_orbit;
use pperiod::period::{dperiod_chow_wang, dperiod_theta, period_direct, period_theta, Method};
use pperiod::potentials::CustomPotential;
use pperiod::{Error, PotentialSpec};

#[test]
fn three_routes_agree_on_a_custom_potential() {
    // V(w) = (w - 1)²/2 + (w - 1)³/6, V(0) = V(√3) = 1/3
    let c = CustomPotential::new(
        "cubic",
        |w| {
            let s = w - 1.0;
            0.5 * s * s + s * s * s / 6.0
        },
        |w| {
            let s = w - 1.0;
            s + 0.5 * s * s
        },
    )
    .with_d2(|w| w);
    let pot = PotentialSpec::custom(2.0, 1.0, 3f64.sqrt(), c).unwrap();
    let e = 0.4 * pot.e_star();
    let direct = period_direct(&pot, e, 1e-12).unwrap().t;
    let theta = period_theta(&pot, e, 64).unwrap().t;
    let ode = simulate_orbit(&pot, e, 0.05, 1e-10).unwrap().period;
    assert!((theta / direct - 1.0).abs() < 1e-8, "{theta} vs {direct}");
    assert!((ode / direct - 1.0).abs() < 1e-6, "{ode} vs {direct}");
}

#[test]
fn derivative_routes_agree_with_each_other() {
    let pot = PotentialSpec::model(4.0, 6.0).unwrap();
    for frac in [0.1, 0.4, 0.8] {
        let e = frac * pot.e_star();
        let cw = dperiod_chow_wang(&pot, e, 1e-12).unwrap();
        let th = dperiod_theta(&pot, e, 64).unwrap();
        assert_eq!(cw.method, Method::ChowWang);
        let (a, b) = (cw.dt_de.unwrap(), th.dt_de.unwrap());
        assert!(a > 0.0 && (a / b - 1.0).abs() < 1e-7, "E = {e}: {a} vs {b}");
    }
}

#[test]
fn sublinear_exponent_uses_the_direct_route_only() {
    let pot = PotentialSpec::model(1.5, 3.0).unwrap();
    let e = 0.2 * pot.e_star();
    assert!(period_direct(&pot, e, 1e-10).unwrap().t > 0.0);
    assert!(matches!(period_theta(&pot, e, 64), Err(Error::UnsupportedRoute(_))));
    assert!(matches!(dperiod_chow_wang(&pot, e, 1e-10), Err(Error::UnsupportedRoute(_))));
}

#[test]
fn energies_outside_the_well_are_refused() {
    let pot = PotentialSpec::model(3.0, 6.0).unwrap();
    for e in [0.0, -1.0, pot.e_star(), 2.0 * pot.e_star(), f64::NAN] {
        assert!(matches!(period_direct(&pot, e, 1e-10), Err(Error::Domain(_))), "E = {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn period_increases_for_superquadratic_models(p in 2.1f64..6.0, r in 1.1f64..3.0, a in 0.05f64..0.9, b in 0.05f64..0.9) {
        prop_assume!((a - b).abs() > 1e-3);
        let pot = PotentialSpec::model(p, p * r).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let t_lo = period_direct(&pot, lo * pot.e_star(), 1e-12).unwrap().t;
        let t_hi = period_direct(&pot, hi * pot.e_star(), 1e-12).unwrap().t;
        prop_assert!(t_hi > t_lo);
    }

    #[test]
    fn theta_route_matches_direct(p in 2.0f64..6.0, r in 1.1f64..3.0, frac in 1e-4f64..0.9) {
        let pot = PotentialSpec::model(p, p * r).unwrap();
        let e = frac * pot.e_star();
        let d = period_direct(&pot, e, 1e-12).unwrap().t;
        let t = period_theta(&pot, e, 64).unwrap().t;
        prop_assert!((t / d - 1.0).abs() < 1e-8);
    }
}
