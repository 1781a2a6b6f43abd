use biharm::models::{bilaplace, interval};
use biharm::quadrature::fd_residual;
use biharm::riquier::{
    biharmonic_measures, localize_green, solve_riquier, verify_hyperharmonic, RegularSubdomain,
};
use biharm::{BiharmonicPair, Error, Evaluable};
use proptest::prelude::*;

#[test]
fn local_green_vanishes_on_the_boundary_and_is_nonnegative() {
    let m = interval::model();
    let omega = RegularSubdomain::new(&m, 0.25, 0.75).unwrap();
    let k = localize_green(&m, &omega);
    for j in 0..=20 {
        let z = 0.25 + 0.5 * j as f64 / 20.0;
        assert!(k.eval(0.25, z).abs() < 1e-14);
        assert!(k.eval(0.75, z).abs() < 1e-14);
    }
    for i in 1..=15 {
        for j in 1..=15 {
            let x = 0.25 + 0.5 * i as f64 / 16.0;
            let z = 0.25 + 0.5 * j as f64 / 16.0;
            assert!(k.eval(x, z) >= -1e-14, "K({x}, {z}) = {}", k.eval(x, z));
        }
    }
}

#[test]
fn local_green_of_the_whole_bilaplace_interval_is_g() {
    let m = bilaplace::model();
    let omega = RegularSubdomain::new(&m, 0.0, 1.0).unwrap();
    let k = localize_green(&m, &omega);
    for (x, z) in [(0.2, 0.7), (0.5, 0.5), (0.9, 0.1)] {
        assert!((k.eval(x, z) - bilaplace::green(x, z)).abs() < 1e-15);
    }
}

#[test]
fn singular_interpolation_is_rejected() {
    let m = interval::model();
    assert!(matches!(
        RegularSubdomain::new(&m, 0.0, 0.5),
        Err(Error::Regularity { .. })
    ));
    assert!(RegularSubdomain::new(&m, 0.5, 0.4).is_err());
    assert!(RegularSubdomain::new(&m, 0.5, 1.5).is_err());
    let omega = RegularSubdomain::new(&m, 0.2, 0.6).unwrap();
    let (c1, c2) = omega.conditions();
    assert!(c1.is_finite() && c2.is_finite() && c1 >= 1.0);
}

#[test]
fn decoupled_case_is_plain_interpolation() {
    let m = interval::model();
    let omega = RegularSubdomain::new(&m, 0.2, 0.8).unwrap();
    let s = solve_riquier(&m, &omega, [1.0, 3.0], [0.0, 0.0]).unwrap();
    // a + b/x through (0.2, 1) and (0.8, 3)
    let b = (1.0 - 3.0) / (1.0 / 0.2 - 1.0 / 0.8);
    let a = 1.0 - b / 0.2;
    for x in [0.3, 0.5, 0.7] {
        assert_eq!(s.v(x), 0.0);
        assert!((s.u(x).unwrap() - (a + b / x)).abs() < 1e-12);
    }
}

#[test]
fn bilaplace_unit_load() {
    let m = bilaplace::model();
    let omega = RegularSubdomain::new(&m, 0.0, 1.0).unwrap();
    let s = solve_riquier(&m, &omega, [0.0, 0.0], [1.0, 1.0]).unwrap();
    for x in [0.1, 0.5, 0.8] {
        assert!((s.v(x) - 1.0).abs() < 1e-14);
        assert!((s.u(x).unwrap() - x * (1.0 - x) / 2.0).abs() < 1e-6);
    }
}

#[test]
fn restriction_reproduces_the_global_pair() {
    let m = interval::model();
    let pair = interval::v1_pair();
    let omega = RegularSubdomain::new(&m, 0.25, 0.75).unwrap();
    let s = solve_riquier(
        &m,
        &omega,
        [pair.u.value(0.25), pair.u.value(0.75)],
        [1.0, 1.0],
    )
    .unwrap();
    for k in 1..10 {
        let x = 0.25 + 0.05 * k as f64;
        assert!((s.u(x).unwrap() - (1.0 - x) / 2.0).abs() <= 1e-6);
    }
}

#[test]
fn harmonic_pairs_are_reproduced() {
    // (xh)'' = -1/x² for h = ln(x)/x, so (h, 1/x²) is harmonic.
    let m = interval::model();
    let h = |x: f64| x.ln() / x;
    let k = |x: f64| 1.0 / (x * x);
    for (a, b) in [(0.2, 0.7), (0.05, 0.95), (0.4, 0.45)] {
        let omega = RegularSubdomain::new(&m, a, b).unwrap();
        let s = solve_riquier(&m, &omega, [h(a), h(b)], [k(a), k(b)]).unwrap();
        for j in 1..8 {
            let x = a + (b - a) * j as f64 / 8.0;
            assert!((s.u(x).unwrap() - h(x)).abs() <= 1e-6, "[{a}, {b}] at {x}");
            assert!((s.v(x) - k(x)).abs() <= 1e-9);
        }
    }
}

#[test]
fn riquier_solutions_solve_the_system() {
    let m = interval::model();
    let omega = RegularSubdomain::new(&m, 0.2, 0.8).unwrap();
    let s = solve_riquier(&m, &omega, [0.3, 1.2], [2.0, 0.5]).unwrap();
    assert!((s.u(0.2).unwrap() - 0.3).abs() < 1e-9 && (s.u(0.8).unwrap() - 1.2).abs() < 1e-9);
    assert!((s.v(0.2) - 2.0).abs() < 1e-12 && (s.v(0.8) - 0.5).abs() < 1e-12);
    let fine = m.clone().with_quad_tol(1e-13);
    let omega_f = RegularSubdomain::new(&fine, 0.2, 0.8).unwrap();
    let sf = solve_riquier(&fine, &omega_f, [0.3, 1.2], [2.0, 0.5]).unwrap();
    for x in [0.3, 0.5, 0.7] {
        let l2 = fd_residual(&m.l2, |t| sf.v(t), x, 1e-4).unwrap();
        let l1 = fd_residual(&m.l1, |t| sf.u(t).unwrap(), x, 1e-4).unwrap();
        assert!(l2.abs() <= 1e-3);
        assert!((l1 + sf.v(x)).abs() <= 1e-3, "{x}: {l1} vs {}", -sf.v(x));
    }
    assert!(s.u(0.9).is_err());
}

#[test]
fn measures_of_the_unit_interval() {
    let m = bilaplace::model();
    let omega = RegularSubdomain::new(&m, 0.0, 1.0).unwrap();
    let t = biharmonic_measures(&m, &omega, 0.5).unwrap();
    assert!((t.mu[0] - 0.5).abs() < 1e-15 && (t.mu[1] - 0.5).abs() < 1e-15);
    assert!((t.lambda[0] - 0.5).abs() < 1e-15 && (t.lambda[1] - 0.5).abs() < 1e-15);
    assert!((t.nu[0] + t.nu[1] - 0.125).abs() < 1e-10);
    assert!((t.nu[0] - t.nu[1]).abs() < 1e-10);
}

#[test]
fn measure_weights_are_nonnegative_and_normalized() {
    for m in [interval::model(), bilaplace::model()] {
        for (a, b) in [(0.1, 0.9), (0.3, 0.4), (0.6, 0.95)] {
            let omega = RegularSubdomain::new(&m, a, b).unwrap();
            for j in 1..6 {
                let x = a + (b - a) * j as f64 / 6.0;
                let t = biharmonic_measures(&m, &omega, x).unwrap();
                assert!(t.weights().iter().all(|w| *w >= -1e-14), "{t:?}");
                assert!((t.mu[0] + t.mu[1] - 1.0).abs() < 1e-12);
                assert!((t.lambda[0] + t.lambda[1] - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn nu_grows_with_the_domain() {
    for m in [interval::model(), bilaplace::model()] {
        let x = 0.5;
        let mut prev = 0.0;
        for (a, b) in [(0.45, 0.55), (0.3, 0.7), (0.15, 0.85), (0.05, 0.95)] {
            let omega = RegularSubdomain::new(&m, a, b).unwrap();
            let t = biharmonic_measures(&m, &omega, x).unwrap();
            let mass = t.nu[0] + t.nu[1];
            assert!(mass >= prev, "[{a}, {b}]: {mass} < {prev}");
            prev = mass;
        }
    }
}

#[test]
fn adjoint_riquier_on_bilaplace() {
    let m = bilaplace::model().adjoint().unwrap();
    let omega = RegularSubdomain::new(&m, 0.0, 1.0).unwrap();
    let t = biharmonic_measures(&m, &omega, 0.25).unwrap();
    assert!(t.weights().iter().all(|w| *w >= 0.0));
    let s = solve_riquier(&m, &omega, [0.0, 0.0], [1.0, 1.0]).unwrap();
    assert!((s.u(0.25).unwrap() - 0.25 * 0.75 / 2.0).abs() < 1e-8);
}

#[test]
fn hyperharmonic_examples() {
    let m = interval::model();
    let probes: Vec<_> = (0..20)
        .map(|k| {
            let a = 0.05 + 0.02 * k as f64;
            let omega = RegularSubdomain::new(&m, a, a + 0.5).unwrap();
            (omega, a + 0.25)
        })
        .collect();
    let r = verify_hyperharmonic(&m, &interval::v1_pair(), &probes).unwrap();
    assert_eq!(r.probes.len(), 20);
    assert!(r.min_margin() >= -1e-6);

    let zero = BiharmonicPair::new(Evaluable::zero(), Evaluable::zero());
    let r = verify_hyperharmonic(&m, &zero, &probes).unwrap();
    assert!(r.probes.iter().all(|p| p.first == 0.0 && p.second == 0.0));

    let under = BiharmonicPair::new(
        Evaluable::closed("(1-x)/4", |x| (1.0 - x) / 4.0),
        Evaluable::constant(1.0),
    );
    let r = verify_hyperharmonic(&m, &under, &probes).unwrap();
    assert!(r.min_margin() < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_matches_solution(
        f in proptest::array::uniform2(0.0f64..3.0),
        g in proptest::array::uniform2(0.0f64..3.0),
        a in 0.05f64..0.5,
        w in 0.1f64..0.45,
        t in 0.05f64..0.95,
    ) {
        for m in [interval::model(), bilaplace::model()] {
            let b = a + w;
            let omega = RegularSubdomain::new(&m, a, b).unwrap();
            let x = a + t * w;
            let s = solve_riquier(&m, &omega, f, g).unwrap();
            let (pu, pv) = biharmonic_measures(&m, &omega, x).unwrap().pair(f, g);
            prop_assert!((s.u(x).unwrap() - pu).abs() <= 1e-6);
            prop_assert!((s.v(x) - pv).abs() <= 1e-6);
            // positivity of the Riquier solution for nonnegative data
            prop_assert!(s.u(x).unwrap() >= -1e-12 && s.v(x) >= -1e-12);
        }
    }
}
